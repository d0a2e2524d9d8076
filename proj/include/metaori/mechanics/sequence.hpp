#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "models.hpp"

namespace metaori::mechanics {

// Cubic Hermite interpolant with finite-difference slopes.
class Hermite {
public:
    Hermite() = default;
    Hermite(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
    {
        const std::size_t n = x_.size();
        require(n >= 3 && y_.size() == n, ErrorKind::InvalidParams, "interpolant needs >= 3 samples");
        m_.resize(n);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            double s0 = (y_[i] - y_[i - 1]) / h0, s1 = (y_[i + 1] - y_[i]) / h1;
            m_[i] = (h1 * s0 + h0 * s1) / (h0 + h1);
        }
        m_[0] = 2 * (y_[1] - y_[0]) / (x_[1] - x_[0]) - m_[1];
        m_[n - 1] = 2 * (y_[n - 1] - y_[n - 2]) / (x_[n - 1] - x_[n - 2]) - m_[n - 2];
        cum_.assign(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            double h = x_[i] - x_[i - 1];
            cum_[i] = cum_[i - 1] + h * (y_[i - 1] + y_[i]) / 2 + h * h * (m_[i - 1] - m_[i]) / 12;
        }
    }

    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

    // value, first and second derivative, and the integral from lo()
    std::array<double, 4> eval(double x) const
    {
        std::size_t i = locate(x);
        double h = x_[i + 1] - x_[i], t = (x - x_[i]) / h;
        double y0 = y_[i], y1 = y_[i + 1], m0 = m_[i] * h, m1 = m_[i + 1] * h;
        double t2 = t * t, t3 = t2 * t;
        double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
        double d1 = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1) / h;
        double d2 = ((12 * t - 6) * y0 + (6 * t - 4) * m0 + (-12 * t + 6) * y1 + (6 * t - 2) * m1) / (h * h);
        double t4 = t2 * t2;
        double in = h * ((t4 / 2 - t3 + t) * y0 + (t4 / 4 - 2 * t3 / 3 + t2 / 2) * m0 + (-t4 / 2 + t3) * y1
                         + (t4 / 4 - t3 / 3) * m1);
        return {v, d1, d2, cum_[i] + in};
    }

private:
    std::size_t locate(double x) const
    {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(i, x_.size() - 2);
    }
    std::vector<double> x_, y_, m_, cum_;
};

struct SegmentSpec {
    metashell::MetashellParams shell_row;  // one row
    kresling::KreslingParams origami_level;
    double infill = 1.0;
};

// One segment on its displacement range: force (N), energy (N mm), volume (mm^3).
class SegmentModel {
public:
    SegmentModel(const SegmentSpec& s, const MaterialParams& m, int samples = 401)
    {
        metashell::MetashellParams row = s.shell_row;
        row.rows = 1;
        row.infill_per_row = {s.infill};
        require(s.infill > 0 && s.infill <= 1, ErrorKind::InvalidParams, "infill must lie in (0, 1]");
        OrigamiModel om(s.origami_level, m);
        dmax_ = std::min(2.5 * row.h, 0.995 * om.d_max());
        dmin_ = std::max(-0.5 * row.h, 0.995 * om.d_min());
        FdOptions o;
        o.samples = samples;
        o.d_max = dmax_;
        o.d_min = dmin_;
        FDCurve meta = metashell_fd(row, m, o);
        FDCurve ori = origami_fd(om, meta.d, 1e-3 * dmax_);
        combined_ = combined_fd(meta, ori);
        std::vector<double> V;
        for (double d : combined_.d) V.push_back(om.volume(d) / units::mm3_to_mL);
        force_ = Hermite(combined_.d, combined_.F);
        volume_ = Hermite(combined_.d, V);
        rest_height_ = om.total_rest_height();
        h_ = row.h;
        // limit points of the segment's own pressure curve
        std::vector<double> P;
        for (double d : combined_.d) P.push_back(pressure(d));
        auto ev = detect_events(combined_.d, P);
        for (const Event& e : ev.events) {
            if (e.type == Event::Maximum && e.x > 0 && std::isnan(d_peak_)) d_peak_ = e.x;
            if (e.type == Event::Minimum && e.x > 0) d_valley_ = e.x;
        }
    }

    double d_min() const { return dmin_; }
    double d_max() const { return dmax_; }
    double rest_height() const { return rest_height_; }
    double arch_height() const { return h_; }
    double d_peak() const { return d_peak_; }
    double d_valley() const { return d_valley_; }
    const FDCurve& curve() const { return combined_; }

    std::array<double, 4> F(double d) const { return force_.eval(d); }   // F, F', F'', E
    std::array<double, 4> V(double d) const { return volume_.eval(d); }  // V, V', V'', -
    double pressure(double d) const { return F(d)[0] / V(d)[1]; }       // N/mm^2

private:
    FDCurve combined_;
    Hermite force_, volume_;
    double dmin_ = 0, dmax_ = 0, rest_height_ = 0, h_ = 0;
    double d_peak_ = NAN, d_valley_ = NAN;
};

struct SnapEvent {
    int segment = 0;
    std::string branch;  // inflation or deflation
    double V = 0;        // mL
    double P = 0;        // mbar, just before the snap
    int step = 0;
    bool jump = false;   // reached by relaxation rather than continuation
};

struct SequenceResult {
    std::vector<double> V;                  // mL, target volume per step
    std::vector<double> P;                  // mbar
    std::vector<std::vector<double>> d;     // per step, per segment (mm)
    std::vector<std::vector<double>> H;     // per step, per segment height (mm)
    std::vector<std::string> branch;        // per step
    std::vector<SnapEvent> events;

    std::vector<SnapEvent> events_for(int segment, const std::string& br) const
    {
        std::vector<SnapEvent> out;
        for (const auto& e : events)
            if (e.segment == segment && e.branch == br) out.push_back(e);
        return out;
    }
};

struct SequenceOptions {
    int steps = 400;           // per ramp direction
    bool deflate = true;
    int max_relax_iterations = 200000;
    int samples = 401;
};

namespace detail {

struct Equilibrium {
    Eigen::VectorXd d;
    double P = 0;
};

class SequenceSolver {
public:
    explicit SequenceSolver(const std::vector<SegmentModel>& s) : seg_(s), n_(static_cast<int>(s.size())) {}

    double total_volume(const Eigen::VectorXd& d) const
    {
        double v = 0;
        for (int i = 0; i < n_; ++i) v += seg_[i].V(d[i])[0];
        return v;
    }

    double energy(const Eigen::VectorXd& d) const
    {
        double e = 0;
        for (int i = 0; i < n_; ++i) e += seg_[i].F(d[i])[3];
        return e;
    }

    bool inside(const Eigen::VectorXd& d) const
    {
        for (int i = 0; i < n_; ++i)
            if (d[i] < seg_[i].d_min() || d[i] > seg_[i].d_max()) return false;
        return true;
    }

    // Damped Newton on F_i = P V_i', sum V_i = V.
    bool newton(Equilibrium& q, double Vt) const
    {
        const double ftol = 1e-10 * force_scale(), vtol = 1e-10 * std::max(1.0, std::abs(Vt));
        for (int it = 0; it < 60; ++it) {
            Eigen::VectorXd r(n_ + 1);
            Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
            double sv = 0;
            for (int i = 0; i < n_; ++i) {
                auto f = seg_[i].F(q.d[i]);
                auto v = seg_[i].V(q.d[i]);
                r[i] = f[0] - q.P * v[1];
                K(i, i) = f[1] - q.P * v[2];
                K(i, n_) = -v[1];
                K(n_, i) = v[1];
                sv += v[0];
            }
            r[n_] = sv - Vt;
            if (r.head(n_).lpNorm<Eigen::Infinity>() < ftol && std::abs(r[n_]) < vtol) return true;
            Eigen::VectorXd step = K.fullPivLu().solve(-r);
            if (!step.allFinite()) return false;
            double lim = 0.05 * seg_[0].arch_height();
            double big = step.head(n_).lpNorm<Eigen::Infinity>();
            if (big > lim) step *= lim / big;
            q.d += step.head(n_);
            q.P += step[n_];
            if (!inside(q.d)) return false;
        }
        return false;
    }

    // Reduced stiffness on the constant-volume tangent.
    bool stable(const Equilibrium& q) const
    {
        if (n_ == 1) return true;
        Eigen::VectorXd g(n_);
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n_, n_);
        for (int i = 0; i < n_; ++i) {
            g[i] = seg_[i].V(q.d[i])[1];
            K(i, i) = seg_[i].F(q.d[i])[1] - q.P * seg_[i].V(q.d[i])[2];
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd Q = qr.householderQ();
        Eigen::MatrixXd Z = Q.rightCols(n_ - 1);
        Eigen::MatrixXd R = Z.transpose() * K * Z;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
        return es.eigenvalues().minCoeff() > -1e-12 * K.cwiseAbs().maxCoeff();
    }

    // Move along V' until the volume constraint holds.
    bool project(Eigen::VectorXd& d, double Vt) const
    {
        for (int it = 0; it < 100; ++it) {
            Eigen::VectorXd g(n_);
            for (int i = 0; i < n_; ++i) g[i] = seg_[i].V(d[i])[1];
            double r = total_volume(d) - Vt;
            if (std::abs(r) < 1e-11 * std::max(1.0, std::abs(Vt))) return true;
            d -= g * (r / g.squaredNorm());
            for (int i = 0; i < n_; ++i) d[i] = std::clamp(d[i], seg_[i].d_min(), seg_[i].d_max());
        }
        return false;
    }

    // Pseudo-dynamic descent on the constant-volume manifold.
    bool relax(Equilibrium& q, double Vt, int max_iter, std::string& why) const
    {
        Eigen::VectorXd d = q.d;
        if (!project(d, Vt)) {
            why = "volume constraint could not be restored";
            return false;
        }
        double alpha = 1e-3 * seg_[0].arch_height() / force_scale();
        double E = energy(d);
        for (int it = 0; it < max_iter; ++it) {
            Eigen::VectorXd F(n_), g(n_);
            for (int i = 0; i < n_; ++i) {
                F[i] = seg_[i].F(d[i])[0];
                g[i] = seg_[i].V(d[i])[1];
            }
            // segments resting on a range end and pushing outward are held there
            std::vector<char> held(n_, 0);
            double P = F.dot(g) / g.squaredNorm();
            for (int pass = 0; pass < n_; ++pass) {
                double num = 0, den = 0;
                for (int i = 0; i < n_; ++i)
                    if (!held[i]) {
                        num += F[i] * g[i];
                        den += g[i] * g[i];
                    }
                if (den > 0) P = num / den;
                bool changed = false;
                for (int i = 0; i < n_; ++i) {
                    if (held[i]) continue;
                    double ri = F[i] - P * g[i];
                    bool at_hi = d[i] >= seg_[i].d_max() - 1e-12 && ri < 0;
                    bool at_lo = d[i] <= seg_[i].d_min() + 1e-12 && ri > 0;
                    if (at_hi || at_lo) held[i] = changed = true;
                }
                if (!changed) break;
            }
            Eigen::VectorXd r = F - P * g;
            bool any_held = false;
            for (int i = 0; i < n_; ++i)
                if (held[i]) {
                    r[i] = 0;
                    any_held = true;
                }
            if (r.lpNorm<Eigen::Infinity>() < 1e-6 * force_scale()) {
                q.d = d;
                q.P = P;
                if (!any_held && newton(q, Vt)) return true;
                q.d = d;
                q.P = P;
                return true;
            }
            bool moved = false;
            for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
                Eigen::VectorXd dn = d - alpha * r;
                for (int i = 0; i < n_; ++i) dn[i] = std::clamp(dn[i], seg_[i].d_min(), seg_[i].d_max());
                if (!project(dn, Vt)) continue;
                double En = energy(dn);
                if (En < E) {
                    d = dn;
                    E = En;
                    moved = true;
                    alpha *= 2.0;
                    break;
                }
            }
            if (!moved) {
                why = "descent stalled with residual " + format_sig(r.lpNorm<Eigen::Infinity>()) + " N at d = ("
                      + format_sig(d[0], 5) + (n_ > 1 ? ", " + format_sig(d[1], 5) : std::string()) + (n_ > 2 ? ", ..." : "")
                      + ")";
                return false;
            }
        }
        why = "relaxation exceeded " + std::to_string(max_iter) + " iterations";
        return false;
    }

    double force_scale() const
    {
        double s = 0;
        for (const auto& g : seg_)
            for (double f : g.curve().F) s = std::max(s, std::abs(f));
        return std::max(s, 1e-9);
    }

private:
    const std::vector<SegmentModel>& seg_;
    int n_;
};

} // namespace detail

inline SequenceResult simulate_sequence(const std::vector<SegmentModel>& segs, const SequenceOptions& o = {})
{
    require(!segs.empty(), ErrorKind::InvalidParams, "at least one segment is required");
    require(o.steps >= 2, ErrorKind::InvalidParams, "at least two volume steps are required");
    const int n = static_cast<int>(segs.size());
    detail::SequenceSolver solver(segs);
    Eigen::VectorXd dmax(n);
    for (int i = 0; i < n; ++i) dmax[i] = segs[i].d_max();
    const double V0 = solver.total_volume(Eigen::VectorXd::Zero(n));
    const double V1 = solver.total_volume(dmax);
    const double span = 0.999 * (V1 - V0);

    std::vector<std::pair<double, std::string>> ramp;
    for (int k = 0; k <= o.steps; ++k) ramp.emplace_back(V0 + span * k / o.steps, "inflation");
    if (o.deflate)
        for (int k = o.steps - 1; k >= 0; --k) ramp.emplace_back(V0 + span * k / o.steps, "deflation");

    SequenceResult res;
    detail::Equilibrium q;
    q.d = Eigen::VectorXd::Zero(n);
    q.P = 0;
    for (std::size_t s = 0; s < ramp.size(); ++s) {
        const auto& [Vt, br] = ramp[s];
        detail::Equilibrium prev = q, trial = q;
        bool ok = solver.newton(trial, Vt) && solver.stable(trial)
                  && (trial.d - prev.d).lpNorm<Eigen::Infinity>() <= 0.1 * segs[0].arch_height();
        bool jumped = false;
        if (ok) {
            q = trial;
        } else {
            std::string why;
            q = prev;
            if (!solver.relax(q, Vt, o.max_relax_iterations, why))
                fail(ErrorKind::NoEquilibrium, "step " + std::to_string(s) + " (V = "
                                                   + format_sig(Vt * units::mm3_to_mL) + " mL, " + br + "): " + why);
            jumped = true;
        }
        for (int i = 0; i < n; ++i) {
            double a = prev.d[i], b = q.d[i];
            double pk = segs[i].d_peak(), vl = segs[i].d_valley();
            bool up = !std::isnan(pk) && a < pk && b >= pk;
            bool down = !std::isnan(vl) && a > vl && b <= vl;
            if ((br == "inflation" && up) || (br == "deflation" && down))
                res.events.push_back({i, br, Vt * units::mm3_to_mL, prev.P * units::Nmm2_to_mbar, static_cast<int>(s),
                                      jumped});
        }
        res.V.push_back(Vt * units::mm3_to_mL);
        res.P.push_back(q.P * units::Nmm2_to_mbar);
        std::vector<double> dd(n), hh(n);
        for (int i = 0; i < n; ++i) {
            dd[i] = q.d[i];
            hh[i] = segs[i].rest_height() + q.d[i];
        }
        res.d.push_back(dd);
        res.H.push_back(hh);
        res.branch.push_back(br);
    }
    return res;
}

inline SequenceResult simulate_sequence(const std::vector<SegmentSpec>& specs, const MaterialParams& m,
                                        const SequenceOptions& o = {})
{
    std::vector<SegmentModel> segs;
    for (const auto& s : specs) segs.emplace_back(s, m, o.samples);
    return simulate_sequence(segs, o);
}

} // namespace metaori::mechanics
