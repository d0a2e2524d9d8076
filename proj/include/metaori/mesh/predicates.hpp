#pragma once

// Orientation predicates with a floating-point filter and an exact big-integer
// fallback (all inputs scaled to a common binary exponent).

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>

#include "trimesh.hpp"

namespace metaori::predicates {

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

template <std::size_t N>
std::array<BigInt, N> to_ints(const std::array<double, N>& x)
{
    std::array<long long, N> mant{};
    std::array<int, N> ex{};
    int emin = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < N; ++i) {
        if (x[i] == 0.0) continue;
        int e;
        double f = std::frexp(x[i], &e);
        mant[i] = static_cast<long long>(std::ldexp(f, 53));
        ex[i] = e - 53;
        emin = std::min(emin, ex[i]);
    }
    std::array<BigInt, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = mant[i];
        if (mant[i] != 0) out[i] <<= (ex[i] - emin);
    }
    return out;
}

inline int sign_of(const BigInt& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

} // namespace detail

inline int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d)
{
    double adx = a.x() - d.x(), bdx = b.x() - d.x(), cdx = c.x() - d.x();
    double ady = a.y() - d.y(), bdy = b.y() - d.y(), cdy = c.y() - d.y();
    double adz = a.z() - d.z(), bdz = b.z() - d.z(), cdz = c.z() - d.z();

    double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    double cdxady = cdx * ady, adxcdy = adx * cdy;
    double adxbdy = adx * bdy, bdxady = bdx * ady;

    double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
    double perm = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz)
                + (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz)
                + (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
    const double eps = std::numeric_limits<double>::epsilon() * 0.5;
    double bound = (7.0 * eps + 56.0 * eps * eps) * perm;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    for (int i = 0; i < 3; ++i)
        if (a[i] == d[i] && b[i] == d[i] && c[i] == d[i]) return 0;

    auto v = detail::to_ints<12>({a.x(), a.y(), a.z(), b.x(), b.y(), b.z(), c.x(), c.y(), c.z(), d.x(), d.y(), d.z()});
    auto ex = [&](int i) {
        return std::array<detail::BigInt, 3>{v[i] - v[9 + i], v[3 + i] - v[9 + i], v[6 + i] - v[9 + i]};
    };
    auto X = ex(0), Y = ex(1), Z = ex(2);
    detail::BigInt r = Z[0] * (X[1] * Y[2] - X[2] * Y[1]) + Z[1] * (X[2] * Y[0] - X[0] * Y[2])
                       + Z[2] * (X[0] * Y[1] - X[1] * Y[0]);
    return detail::sign_of(r);
}

inline int orient2d(const Vec2& a, const Vec2& b, const Vec2& c)
{
    double l = (a.x() - c.x()) * (b.y() - c.y());
    double r = (a.y() - c.y()) * (b.x() - c.x());
    double det = l - r;
    const double eps = std::numeric_limits<double>::epsilon() * 0.5;
    double bound = (3.0 * eps + 16.0 * eps * eps) * (std::abs(l) + std::abs(r));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    auto v = detail::to_ints<6>({a.x(), a.y(), b.x(), b.y(), c.x(), c.y()});
    detail::BigInt e = (v[0] - v[4]) * (v[3] - v[5]) - (v[1] - v[5]) * (v[2] - v[4]);
    return detail::sign_of(e);
}

// Closed segment pq against closed triangle abc, non-coplanar case.
inline bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c)
{
    int sp = orient3d(a, b, c, p), sq = orient3d(a, b, c, q);
    if (sp == sq && sp != 0) return false;
    if (sp == 0 && sq == 0) return false;
    int s1 = orient3d(p, q, a, b), s2 = orient3d(p, q, b, c), s3 = orient3d(p, q, c, a);
    bool neg = s1 < 0 || s2 < 0 || s3 < 0;
    bool pos = s1 > 0 || s2 > 0 || s3 > 0;
    return !(neg && pos);
}

inline bool segments_intersect_2d(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2)
{
    int a = orient2d(p1, p2, q1), b = orient2d(p1, p2, q2);
    int c = orient2d(q1, q2, p1), d = orient2d(q1, q2, p2);
    if (a * b < 0 && c * d < 0) return true;
    auto on = [](const Vec2& s, const Vec2& e, const Vec2& x) {
        return std::min(s.x(), e.x()) <= x.x() && x.x() <= std::max(s.x(), e.x())
            && std::min(s.y(), e.y()) <= x.y() && x.y() <= std::max(s.y(), e.y());
    };
    if (a == 0 && on(p1, p2, q1)) return true;
    if (b == 0 && on(p1, p2, q2)) return true;
    if (c == 0 && on(q1, q2, p1)) return true;
    if (d == 0 && on(q1, q2, p2)) return true;
    return false;
}

inline bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c)
{
    int s1 = orient2d(a, b, p), s2 = orient2d(b, c, p), s3 = orient2d(c, a, p);
    bool neg = s1 < 0 || s2 < 0 || s3 < 0;
    bool pos = s1 > 0 || s2 > 0 || s3 > 0;
    return !(neg && pos);
}

// Closed triangle-triangle intersection test.
inline bool triangles_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2,
                                const Vec3& b0, const Vec3& b1, const Vec3& b2)
{
    int s0 = orient3d(a0, a1, a2, b0), s1 = orient3d(a0, a1, a2, b1), s2 = orient3d(a0, a1, a2, b2);
    if ((s0 > 0 && s1 > 0 && s2 > 0) || (s0 < 0 && s1 < 0 && s2 < 0)) return false;
    int t0 = orient3d(b0, b1, b2, a0), t1 = orient3d(b0, b1, b2, a1), t2 = orient3d(b0, b1, b2, a2);
    if ((t0 > 0 && t1 > 0 && t2 > 0) || (t0 < 0 && t1 < 0 && t2 < 0)) return false;

    if (s0 == 0 && s1 == 0 && s2 == 0) {
        Vec3 n = (a1 - a0).cross(a2 - a0);
        int drop = 0;
        if (std::abs(n.y()) > std::abs(n[drop])) drop = 1;
        if (std::abs(n.z()) > std::abs(n[drop])) drop = 2;
        auto pr = [drop](const Vec3& v) {
            return drop == 0 ? Vec2(v.y(), v.z()) : (drop == 1 ? Vec2(v.z(), v.x()) : Vec2(v.x(), v.y()));
        };
        Vec2 A[3] = {pr(a0), pr(a1), pr(a2)}, B[3] = {pr(b0), pr(b1), pr(b2)};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (segments_intersect_2d(A[i], A[(i + 1) % 3], B[j], B[(j + 1) % 3])) return true;
        if (point_in_triangle_2d(A[0], B[0], B[1], B[2])) return true;
        if (point_in_triangle_2d(B[0], A[0], A[1], A[2])) return true;
        return false;
    }

    const Vec3* A[3] = {&a0, &a1, &a2};
    const Vec3* B[3] = {&b0, &b1, &b2};
    for (int i = 0; i < 3; ++i) {
        if (segment_hits_triangle(*A[i], *A[(i + 1) % 3], b0, b1, b2)) return true;
        if (segment_hits_triangle(*B[i], *B[(i + 1) % 3], a0, a1, a2)) return true;
    }
    return false;
}

} // namespace metaori::predicates
