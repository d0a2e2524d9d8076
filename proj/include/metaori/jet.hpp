#pragma once

// Second-order forward-mode dual number with a fixed number of seeds.

#include <Eigen/Dense>
#include <cmath>

namespace metaori {

template <int N>
struct Jet {
    using Vec = Eigen::Matrix<double, N, 1>;
    using Mat = Eigen::Matrix<double, N, N>;

    double v = 0.0;
    Vec g = Vec::Zero();
    Mat H = Mat::Zero();

    Jet() = default;
    Jet(double value) : v(value) {}

    static Jet variable(double value, int i)
    {
        Jet j(value);
        j.g[i] = 1.0;
        return j;
    }

    // f(this) given f, f', f''
    Jet chain(double f0, double f1, double f2) const
    {
        Jet r(f0);
        r.g = f1 * g;
        r.H = f1 * H + f2 * (g * g.transpose());
        return r;
    }

    Jet& operator+=(const Jet& o) { v += o.v; g += o.g; H += o.H; return *this; }
    Jet& operator-=(const Jet& o) { v -= o.v; g -= o.g; H -= o.H; return *this; }
    Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(const Jet& a)
    {
        Jet r;
        r.v = -a.v; r.g = -a.g; r.H = -a.H;
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet r(a.v * b.v);
        r.g = a.v * b.g + b.v * a.g;
        r.H = a.v * b.H + b.v * a.H + a.g * b.g.transpose() + b.g * a.g.transpose();
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.inv(); }
    friend Jet operator+(Jet a, double s) { a.v += s; return a; }
    friend Jet operator+(double s, Jet a) { a.v += s; return a; }
    friend Jet operator-(Jet a, double s) { a.v -= s; return a; }
    friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
    friend Jet operator*(Jet a, double s) { a.v *= s; a.g *= s; a.H *= s; return a; }
    friend Jet operator*(double s, Jet a) { return a * s; }
    friend Jet operator/(Jet a, double s) { return a * (1.0 / s); }

    Jet inv() const { double i = 1.0 / v; return chain(i, -i * i, 2.0 * i * i * i); }
};

template <int N> Jet<N> sqrt(const Jet<N>& a)
{
    double s = std::sqrt(a.v);
    return a.chain(s, 0.5 / s, -0.25 / (s * a.v));
}
template <int N> Jet<N> sin(const Jet<N>& a)
{
    return a.chain(std::sin(a.v), std::cos(a.v), -std::sin(a.v));
}
template <int N> Jet<N> cos(const Jet<N>& a)
{
    return a.chain(std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
}
template <int N> Jet<N> atan(const Jet<N>& a)
{
    double d = 1.0 / (1.0 + a.v * a.v);
    return a.chain(std::atan(a.v), d, -2.0 * a.v * d * d);
}

// atan2 through the differentials of atan(y/x), valid away from the origin.
template <int N> Jet<N> atan2(const Jet<N>& y, const Jet<N>& x)
{
    double r2 = x.v * x.v + y.v * y.v;
    Jet<N> out(std::atan2(y.v, x.v));
    Eigen::Matrix<double, N, 1> dy = y.g, dx = x.g;
    out.g = (x.v * dy - y.v * dx) / r2;
    // d2 theta = [x d2y - y d2x]/r2 + second-order terms in (dx, dy)
    double a = 2.0 * x.v * y.v / (r2 * r2);           // d2/dx2 of theta
    double b = (x.v * x.v - y.v * y.v) / (r2 * r2);    // d2/dxdy
    out.H = (x.v * y.H - y.v * x.H) / r2
          + a * (dx * dx.transpose()) - a * (dy * dy.transpose())
          - b * (dx * dy.transpose() + dy * dx.transpose());
    return out;
}

inline double value_of(double x) { return x; }
template <int N> double value_of(const Jet<N>& j) { return j.v; }

} // namespace metaori
