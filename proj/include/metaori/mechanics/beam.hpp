#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "../error.hpp"
#include "../jet.hpp"
#include "../units.hpp"

namespace metaori::mechanics {

// Clamped-clamped cosine arch y0 = (h/2)(1 - cos(2 pi x / l)), rectangular section b x t.
struct BeamSpec {
    double l = 22.5, h = 9.4, t = 1.25, b = 5.0, E = 12.0;

    double EA() const { return E * b * t; }
    double EI() const { return E * b * t * t * t / 12.0; }
    double force_scale() const { return EI() * h / (l * l * l); }
};

inline void validate(const BeamSpec& s)
{
    for (double v : {s.l, s.h, s.t, s.b, s.E})
        require(std::isfinite(v) && v > 0, ErrorKind::InvalidParams, "beam dimensions and modulus must be > 0");
}

namespace detail {

// Energy density of a planar extensible rod per unit parameter length, as a function
// of (X', Y', X'', Y'') with the reference stretch J0 and reference curvature k0.
inline Jet<4> rod_density(const Jet<4>& xp, const Jet<4>& yp, const Jet<4>& xpp, const Jet<4>& ypp, double J0,
                          double k0, double EA, double EI)
{
    Jet<4> j2 = xp * xp + yp * yp;
    Jet<4> eps = sqrt(j2) / J0 - 1.0;
    Jet<4> kap = (xp * ypp - yp * xpp) / j2 / J0 - k0;
    return (0.5 * EA * J0) * eps * eps + (0.5 * EI * J0) * kap * kap;
}

inline const std::array<double, 4>& gauss_x()
{
    static const std::array<double, 4> x{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                         0.8611363115940526};
    return x;
}
inline const std::array<double, 4>& gauss_w()
{
    static const std::array<double, 4> w{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                         0.3478548451374538};
    return w;
}

} // namespace detail

// Symmetric half of the arch (apex rotation held by the shuttle), Ritz discretized:
// w = -d g + sum q_j psi_j, u = sum p_k sin(k pi xi), xi = 2x/l on [0, 1].
class HalfBeamRom {
public:
    struct State {
        Eigen::VectorXd z;
        double d = 0.0;
        double energy = 0.0;
        double dEdd = 0.0;     // half-beam
        double stiffness = 0.0; // d(dEdd)/dd along the equilibrium path
        int iterations = 0;
    };

    explicit HalfBeamRom(const BeamSpec& s, int cos_modes = 3, int clamped_modes = 3, int axial_modes = 6,
                         int intervals = 48)
        : spec_(s)
    {
        validate(s);
        static const double lambdas[] = {8.986818916, 15.45061459, 21.80824499, 28.13239610, 34.44151740};
        require(clamped_modes <= 5, ErrorKind::InvalidParams, "at most 5 clamped modes");
        nq_ = cos_modes + clamped_modes;
        np_ = axial_modes;
        n_ = nq_ + np_;
        const double half = 0.5 * s.l, sc = 2.0 / s.l, pi = units::pi;
        for (int e = 0; e < intervals; ++e) {
            for (int g = 0; g < 4; ++g) {
                double xi = (e + 0.5 * (1.0 + detail::gauss_x()[g])) / intervals;
                double x = half * xi;
                Point p;
                p.w = detail::gauss_w()[g] * 0.5 * half / intervals;
                double k2 = 2.0 * pi / s.l;
                double y0p = 0.5 * s.h * k2 * std::sin(k2 * x);
                double y0pp = 0.5 * s.h * k2 * k2 * std::cos(k2 * x);
                p.J0 = std::sqrt(1.0 + y0p * y0p);
                p.k0 = y0pp / (1.0 + y0p * y0p) / p.J0;
                p.y0p = y0p;
                p.y0pp = y0pp;
                p.B = Eigen::MatrixXd::Zero(4, n_ + 1);
                int c = 0;
                for (int k = 1; k <= cos_modes; ++k, ++c) {
                    double a = 2.0 * pi * k;
                    p.B(1, c) = a * std::sin(a * xi) * sc;
                    p.B(3, c) = a * a * std::cos(a * xi) * sc * sc;
                }
                for (int k = 0; k < clamped_modes; ++k, ++c) {
                    double L = lambdas[k];
                    p.B(1, c) = (-2.0 + L * std::sin(L * xi) + 2.0 * std::cos(L * xi)) * sc;
                    p.B(3, c) = (L * L * std::cos(L * xi) - 2.0 * L * std::sin(L * xi)) * sc * sc;
                }
                for (int k = 1; k <= axial_modes; ++k, ++c) {
                    double a = pi * k;
                    p.B(0, c) = a * std::cos(a * xi) * sc;
                    p.B(2, c) = -a * a * std::sin(a * xi) * sc * sc;
                }
                // -d * g with g = (1 - cos(2 pi x / l)) / 2
                p.B(1, n_) = -0.5 * k2 * std::sin(k2 * x);
                p.B(3, n_) = -0.5 * k2 * k2 * std::cos(k2 * x);
                pts_.push_back(std::move(p));
            }
        }
    }

    int dofs() const { return n_; }
    const BeamSpec& spec() const { return spec_; }

    // Energy, gradient and Hessian in (z, d); the last index is d.
    double evaluate(const Eigen::VectorXd& z, double d, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) const
    {
        Eigen::VectorXd zd(n_ + 1);
        zd << z, d;
        double E = 0;
        if (grad) grad->setZero(n_ + 1);
        if (hess) hess->setZero(n_ + 1, n_ + 1);
        const double EA = spec_.EA(), EI = spec_.EI();
        for (const Point& p : pts_) {
            Eigen::Vector4d loc = p.B * zd;
            Jet<4> xp = Jet<4>::variable(1.0 + loc[0], 0);
            Jet<4> yp = Jet<4>::variable(p.y0p + loc[1], 1);
            Jet<4> xpp = Jet<4>::variable(loc[2], 2);
            Jet<4> ypp = Jet<4>::variable(p.y0pp + loc[3], 3);
            Jet<4> e = detail::rod_density(xp, yp, xpp, ypp, p.J0, p.k0, EA, EI);
            E += p.w * e.v;
            if (grad) grad->noalias() += p.w * p.B.transpose() * e.g;
            if (hess) hess->noalias() += p.w * p.B.transpose() * e.H * p.B;
        }
        return E;
    }

    // Equilibrium at imposed d, starting from z0.
    State solve(double d, const Eigen::VectorXd& z0) const
    {
        State s;
        s.d = d;
        s.z = z0.size() == n_ ? z0 : Eigen::VectorXd::Zero(n_);
        Eigen::VectorXd g;
        Eigen::MatrixXd H;
        const double gtol = 1e-11 * (spec_.EA() + spec_.EI() / (spec_.t * spec_.t));
        double E = evaluate(s.z, d, &g, &H);
        int it = 0;
        for (; it < 200; ++it) {
            Eigen::VectorXd gz = g.head(n_);
            if (gz.lpNorm<Eigen::Infinity>() < gtol) break;
            Eigen::MatrixXd Hz = H.topLeftCorner(n_, n_);
            Eigen::VectorXd step;
            double mu = 0;
            for (;;) {
                Eigen::LLT<Eigen::MatrixXd> llt(Hz + mu * Eigen::MatrixXd::Identity(n_, n_));
                if (llt.info() == Eigen::Success) {
                    step = -llt.solve(gz);
                    break;
                }
                mu = mu == 0 ? 1e-8 * Hz.diagonal().cwiseAbs().maxCoeff() : 4 * mu;
            }
            double a = 1.0, slope = gz.dot(step);
            Eigen::VectorXd zn;
            double En = E;
            for (int ls = 0; ls < 60; ++ls, a *= 0.5) {
                zn = s.z + a * step;
                En = evaluate(zn, d, nullptr, nullptr);
                if (En <= E + 1e-4 * a * slope || std::abs(En - E) <= 1e-15 * std::abs(E)) break;
            }
            s.z = zn;
            E = evaluate(s.z, d, &g, &H);
        }
        if (g.head(n_).lpNorm<Eigen::Infinity>() >= gtol * 1e3) {
            std::ostringstream os;
            os << "beam ROM did not converge at d=" << d << " after " << it << " iterations, |g|="
               << g.head(n_).lpNorm<Eigen::Infinity>();
            fail(ErrorKind::NoConvergence, os.str());
        }
        s.iterations = it;
        s.energy = E;
        s.dEdd = g[n_];
        Eigen::MatrixXd Hz = H.topLeftCorner(n_, n_);
        Eigen::VectorXd Hzd = H.col(n_).head(n_);
        s.stiffness = H(n_, n_) - Hzd.dot(Hz.ldlt().solve(Hzd));
        return s;
    }

    // Equilibria along increasing d with a tangent predictor.
    std::vector<State> path(const std::vector<double>& ds) const
    {
        std::vector<State> out;
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n_);
        double dprev = 0.0;
        Eigen::VectorXd dz = Eigen::VectorXd::Zero(n_);
        for (double d : ds) {
            // substeps keep the predictor within the Newton basin
            double span = d - dprev;
            int sub = std::max(1, static_cast<int>(std::ceil(std::abs(span) / (0.02 * spec_.h))));
            State s;
            for (int k = 1; k <= sub; ++k) {
                double dk = dprev + span * k / sub;
                Eigen::VectorXd guess = z + dz * (span / sub);
                s = solve(dk, guess);
                Eigen::VectorXd g;
                Eigen::MatrixXd H;
                evaluate(s.z, dk, &g, &H);
                dz = -H.topLeftCorner(n_, n_).ldlt().solve(H.col(n_).head(n_));
                z = s.z;
            }
            dprev = d;
            out.push_back(s);
        }
        return out;
    }

    // Force on one full beam at the apex.
    static double beam_force(const State& s) { return 2.0 * s.dEdd; }

private:
    struct Point {
        double w, J0, k0, y0p, y0pp;
        Eigen::MatrixXd B;
    };
    BeamSpec spec_;
    int nq_ = 0, np_ = 0, n_ = 0;
    std::vector<Point> pts_;
};

// Full arch as a discrete extensible chain. The apex node is held at height h - d and the
// segment after it mirrors the direction of the segment before it (no apex rotation).
class ElasticaChain {
public:
    struct Result {
        double force = 0.0;   // dE/dd on the full beam
        double energy = 0.0;
        int iterations = 0;
        double grad_norm = 0.0;
        double tolerance = 0.0;
    };

    explicit ElasticaChain(const BeamSpec& s, int segments = 240) : spec_(s), N_(segments)
    {
        validate(s);
        require(segments >= 200 && segments % 2 == 0, ErrorKind::InvalidParams,
                "oracle needs an even segment count >= 200");
        m_ = N_ / 2;
        X0_.resize(N_ + 1);
        Y0_.resize(N_ + 1);
        for (int i = 0; i <= N_; ++i) {
            X0_[i] = s.l * i / N_;
            Y0_[i] = 0.5 * s.h * (1.0 - std::cos(2.0 * units::pi * X0_[i] / s.l));
        }
        L0_.resize(N_);
        for (int i = 0; i < N_; ++i) L0_[i] = std::hypot(X0_[i + 1] - X0_[i], Y0_[i + 1] - Y0_[i]);
        // dof layout: x,y of nodes 1..N-1 except y_m, node m+1 replaced by its segment length
        idx_x_.assign(N_ + 1, -1);
        idx_y_.assign(N_ + 1, -1);
        int c = 0;
        for (int i = 1; i < N_; ++i) {
            if (i == m_ + 1) continue;
            idx_x_[i] = c++;
            if (i != m_) idx_y_[i] = c++;
        }
        idx_L_ = c++;
        n_ = c;
        rest_.resize(n_);
        for (int i = 1; i < N_; ++i) {
            if (idx_x_[i] >= 0) rest_[idx_x_[i]] = X0_[i];
            if (idx_y_[i] >= 0) rest_[idx_y_[i]] = Y0_[i];
        }
        rest_[idx_L_] = L0_[m_];
        dtheta0_.resize(N_ + 1);
        for (int i = 0; i <= N_; ++i) dtheta0_[i] = bend_angle_rest(i);
        x_ = rest_;
    }

    int dofs() const { return n_; }

    // Equilibrium at imposed d, continuing from the previous solution.
    Result solve(double d)
    {
        Result r;
        Eigen::VectorXd g;
        Eigen::SparseMatrix<double> H;
        double dEdd = 0;
        double E = assemble(x_, d, &g, &H, &dEdd);
        // 1e-8, or the summation round-off floor of stiff chains
        const double tol = std::max(1e-8, 1e3 * std::numeric_limits<double>::epsilon() * term_scale_);
        int it = 0;
        for (; it < 400; ++it) {
            if (g.lpNorm<Eigen::Infinity>() < tol) break;
            Eigen::VectorXd step;
            double mu = 0;
            Eigen::SparseMatrix<double> I(n_, n_);
            I.setIdentity();
            for (int tries = 0; tries < 80; ++tries) {
                Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
                ldlt.compute(mu > 0 ? Eigen::SparseMatrix<double>(H + mu * I) : H);
                if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0).all()) {
                    step = -ldlt.solve(g);
                    break;
                }
                mu = mu == 0 ? 1e-10 * max_diag(H) : 4 * mu;
            }
            if (step.size() != n_) break;
            double a = 1.0, slope = g.dot(step);
            const double gn = g.norm();
            Eigen::VectorXd xn, gtrial;
            for (int ls = 0; ls < 60; ++ls, a *= 0.5) {
                xn = x_ + a * step;
                double En = assemble(xn, d, &gtrial, nullptr, nullptr);
                if (En <= E + 1e-4 * a * slope) break;
                // energy differences below round-off: fall back to the gradient norm
                if (std::abs(En - E) <= 1e-12 * std::abs(E) && gtrial.norm() < gn) break;
            }
            x_ = xn;
            E = assemble(x_, d, &g, &H, &dEdd);
        }
        r.iterations = it;
        r.grad_norm = g.lpNorm<Eigen::Infinity>();
        r.tolerance = tol;
        if (!(r.grad_norm < tol)) {
            std::ostringstream os;
            os << "elastica oracle stalled at d=" << d << " after " << it << " Newton iterations, |g|=" << r.grad_norm
               << ", E=" << E;
            fail(ErrorKind::NoConvergence, os.str());
        }
        r.energy = E;
        r.force = dEdd;
        return r;
    }

    // Forces along increasing displacements with continuation substeps.
    std::vector<Result> path(const std::vector<double>& ds)
    {
        std::vector<Result> out;
        double prev = 0.0;
        x_ = rest_;
        for (double d : ds) {
            int sub = std::max(1, static_cast<int>(std::ceil(std::abs(d - prev) / (0.01 * spec_.h))));
            Result r;
            for (int k = 1; k <= sub; ++k) r = solve(prev + (d - prev) * k / sub);
            prev = d;
            out.push_back(r);
        }
        return out;
    }

private:
    static double max_diag(const Eigen::SparseMatrix<double>& H)
    {
        double m = 1e-12;
        for (int k = 0; k < H.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it)
                if (it.row() == it.col()) m = std::max(m, std::abs(it.value()));
        return m;
    }

    static constexpr int J = 10;
    using JetT = Jet<J>;

    struct Local {
        std::array<int, J> dof{};  // global index, -1 for d, -2 unused
        int count = 0;
        int add(int g)
        {
            for (int k = 0; k < count; ++k)
                if (dof[k] == g) return k;
            dof[count] = g;
            return count++;
        }
    };

    double bend_angle_rest(int i) const
    {
        auto seg = [&](int k) { return Eigen::Vector2d(X0_[k + 1] - X0_[k], Y0_[k + 1] - Y0_[k]); };
        Eigen::Vector2d a = i == 0 ? Eigen::Vector2d(1, 0) : seg(i - 1);
        Eigen::Vector2d b = i == N_ ? Eigen::Vector2d(1, 0) : seg(i);
        return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }

    // Node i as jets over the local dof set.
    std::array<JetT, 2> node(int i, const Eigen::VectorXd& x, double d, Local& loc) const
    {
        auto var = [&](int g, double v) {
            int k = loc.add(g);
            return JetT::variable(v, k);
        };
        if (i == 0 || i == N_) return {JetT(X0_[i]), JetT(0.0)};
        if (i == m_) return {var(idx_x_[i], x[idx_x_[i]]), var(-1, spec_.h - d)};
        if (i == m_ + 1) {
            auto a = node(m_ - 1, x, d, loc);
            auto b = node(m_, x, d, loc);
            JetT dx = b[0] - a[0], dy = b[1] - a[1];
            JetT len = sqrt(dx * dx + dy * dy);
            JetT L = var(idx_L_, x[idx_L_]);
            return {b[0] + L * dx / len, b[1] - L * dy / len};
        }
        return {var(idx_x_[i], x[idx_x_[i]]), var(idx_y_[i], x[idx_y_[i]])};
    }

    void scatter(const JetT& e, const Local& loc, Eigen::VectorXd* g, std::vector<Eigen::Triplet<double>>* trip,
                 double* dEdd) const
    {
        for (int a = 0; a < loc.count; ++a) {
            term_scale_ = std::max(term_scale_, std::abs(e.g[a]));
            int ga = loc.dof[a];
            if (ga == -1) {
                if (dEdd) *dEdd -= e.g[a];  // y_m = h - d
                continue;
            }
            if (g) (*g)[ga] += e.g[a];
            if (trip)
                for (int b = 0; b < loc.count; ++b)
                    if (loc.dof[b] >= 0) trip->emplace_back(ga, loc.dof[b], e.H(a, b));
        }
    }

    double assemble(const Eigen::VectorXd& x, double d, Eigen::VectorXd* g, Eigen::SparseMatrix<double>* H,
                    double* dEdd) const
    {
        const double EA = spec_.EA(), EI = spec_.EI();
        double E = 0;
        if (g) g->setZero(n_);
        if (dEdd) *dEdd = 0;
        std::vector<Eigen::Triplet<double>> trip;
        std::vector<Eigen::Triplet<double>>* tp = H ? &trip : nullptr;
        for (int i = 0; i < N_; ++i) {
            Local loc;
            auto a = node(i, x, d, loc);
            auto b = node(i + 1, x, d, loc);
            JetT dx = b[0] - a[0], dy = b[1] - a[1];
            JetT s = sqrt(dx * dx + dy * dy) - L0_[i];
            JetT e = (0.5 * EA / L0_[i]) * s * s;
            E += e.v;
            scatter(e, loc, g, tp, dEdd);
        }
        for (int i = 0; i <= N_; ++i) {
            Local loc;
            std::array<JetT, 2> ta, tb;
            double ell;
            if (i == 0) {
                auto p = node(0, x, d, loc), q = node(1, x, d, loc);
                ta = {JetT(1.0), JetT(0.0)};
                tb = {q[0] - p[0], q[1] - p[1]};
                ell = 0.5 * L0_[0];
            } else if (i == N_) {
                auto p = node(N_ - 1, x, d, loc), q = node(N_, x, d, loc);
                ta = {q[0] - p[0], q[1] - p[1]};
                tb = {JetT(1.0), JetT(0.0)};
                ell = 0.5 * L0_[N_ - 1];
            } else {
                auto p = node(i - 1, x, d, loc), q = node(i, x, d, loc), r = node(i + 1, x, d, loc);
                ta = {q[0] - p[0], q[1] - p[1]};
                tb = {r[0] - q[0], r[1] - q[1]};
                ell = 0.5 * (L0_[i - 1] + L0_[i]);
            }
            JetT cr = ta[0] * tb[1] - ta[1] * tb[0];
            JetT dt = ta[0] * tb[0] + ta[1] * tb[1];
            JetT dth = atan2(cr, dt) - dtheta0_[i];
            JetT e = (0.5 * EI / ell) * dth * dth;
            E += e.v;
            scatter(e, loc, g, tp, dEdd);
        }
        if (H) {
            H->resize(n_, n_);
            H->setFromTriplets(trip.begin(), trip.end());
        }
        return E;
    }

    BeamSpec spec_;
    int N_, m_, n_ = 0, idx_L_ = 0;
    std::vector<double> X0_, Y0_, L0_, dtheta0_;
    std::vector<int> idx_x_, idx_y_;
    Eigen::VectorXd rest_, x_;
    mutable double term_scale_ = 0.0;
};

} // namespace metaori::mechanics
