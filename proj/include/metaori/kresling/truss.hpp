#pragma once

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <vector>

#include "../jet.hpp"
#include "assembly.hpp"

namespace metaori::kresling {

struct TrussSettings {
    double E = 12.0;               // MPa
    double bar_area = 0.0;         // mm^2; 0 selects t_face * b / 2
    double hinge_stiffness = 0.0;  // N mm / rad per mm of crease
};

inline double bar_area(const KreslingParams& p, const TrussSettings& s)
{
    return s.bar_area > 0 ? s.bar_area : p.t_face * p.b / 2.0;
}

struct Bar {
    int i, j;
    double L0;
    double k;  // N/mm
};

// Rotational spring on crease (i, j) between wing vertices p and q.
struct Hinge {
    int i, j, p, q;
    double theta0;
    double k;  // N mm / rad
};

struct TrussModel {
    std::vector<Vec3> nodes;
    std::vector<Bar> bars;
    std::vector<Hinge> hinges;
    std::vector<Tri> facets;

    double energy(const std::vector<Vec3>& x) const;
};

namespace detail {

template <typename T>
using P3 = std::array<T, 3>;

template <typename T>
T dot3(const P3<T>& a, const P3<T>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

template <typename T>
P3<T> sub3(const P3<T>& a, const P3<T>& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

template <typename T>
P3<T> cross3(const P3<T>& a, const P3<T>& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <typename T>
T norm3(const P3<T>& a) { using std::sqrt; return sqrt(dot3(a, a)); }

// Unsigned dihedral in [0, pi] at crease (a, b) with wings p and q.
template <typename T>
T dihedral3(const P3<T>& a, const P3<T>& b, const P3<T>& p, const P3<T>& q)
{
    using std::atan2;
    P3<T> e = sub3(b, a);
    P3<T> n1 = cross3(e, sub3(p, a));
    P3<T> n2 = cross3(e, sub3(q, a));
    return atan2(norm3(cross3(n1, n2)), dot3(n1, n2));
}

} // namespace detail

inline double TrussModel::energy(const std::vector<Vec3>& x) const
{
    double U = 0.0;
    for (const Bar& b : bars) {
        double L = (x[b.i] - x[b.j]).norm();
        U += 0.5 * b.k * (L - b.L0) * (L - b.L0);
    }
    for (const Hinge& h : hinges) {
        if (h.k == 0.0) continue;
        auto P = [&](int i) { return detail::P3<double>{x[i].x(), x[i].y(), x[i].z()}; };
        double th = detail::dihedral3(P(h.i), P(h.j), P(h.p), P(h.q));
        U += 0.5 * h.k * (th - h.theta0) * (th - h.theta0);
    }
    return U;
}

// Bar-and-hinge model of the rest configuration. Polygon edges are carried as
// bars for completeness; the kinematic parametrization keeps them at rest length.
inline TrussModel build_truss(const Origami& o, const TrussSettings& s)
{
    TrussModel t;
    const KreslingState& st = o.state;
    const int n = st.n;
    t.nodes = st.vertex_coords();
    const double A = bar_area(o.params, s);
    auto add_bar = [&](int i, int j) {
        double L0 = (t.nodes[i] - t.nodes[j]).norm();
        t.bars.push_back({i, j, L0, s.E * A / L0});
    };
    for (int k = 0; k <= st.layers(); ++k)
        for (int i = 0; i < n; ++i) add_bar(ring_vertex(n, k, i), ring_vertex(n, k, i + 1));
    t.facets = lateral_faces(st);
    // every lateral crease is shared by two facets
    for (int k = 0; k < st.layers(); ++k) {
        for (int i = 0; i < n; ++i) {
            int B0 = ring_vertex(n, k, i), B1 = ring_vertex(n, k, i + 1);
            int T0 = ring_vertex(n, k + 1, i), T1 = ring_vertex(n, k + 1, i + 1), Tm = ring_vertex(n, k + 1, i - 1);
            if (st.hand[k] < 0) {
                // mirrored layer: the a crease joins U_i and L_i, c joins U_{i+1} and L_i
                int U0 = T0, U1 = T1, L0 = B0, Lm = ring_vertex(n, k, i - 1), L1 = B1;
                add_bar(U0, L0);
                add_bar(U1, L0);
                t.hinges.push_back({U0, L0, U1, Lm, 0.0, 0.0});
                t.hinges.push_back({L0, U1, U0, L1, 0.0, 0.0});
            } else {
                add_bar(B0, T0);
                add_bar(B1, T0);
                t.hinges.push_back({B0, T0, B1, Tm, 0.0, 0.0});
                t.hinges.push_back({B1, T0, B0, T1, 0.0, 0.0});
            }
        }
    }
    for (Hinge& h : t.hinges) {
        auto P = [&](int i) { return detail::P3<double>{t.nodes[i].x(), t.nodes[i].y(), t.nodes[i].z()}; };
        h.theta0 = detail::dihedral3(P(h.i), P(h.j), P(h.p), P(h.q));
        h.k = s.hinge_stiffness * (t.nodes[h.i] - t.nodes[h.j]).norm();
    }
    // end polygons close the facet set for volume integration
    const int top = st.layers();
    for (int i = 1; i + 1 < n; ++i) {
        t.facets.push_back({ring_vertex(n, 0, 0), ring_vertex(n, 0, i + 1), ring_vertex(n, 0, i)});
        t.facets.push_back({ring_vertex(n, top, 0), ring_vertex(n, top, i), ring_vertex(n, top, i + 1)});
    }
    if (st.chirality == Chirality::Left)
        for (std::size_t f = t.facets.size() - 2 * (n - 2); f < t.facets.size(); ++f)
            std::swap(t.facets[f][1], t.facets[f][2]);
    return t;
}

// Energy of one as-constructed layer at height H and twist phi, with derivatives.
class LayerEnergy {
public:
    LayerEnergy(const KreslingParams& p, const Closure& c, const TrussSettings& s)
        : n_(p.n), R_(circumradius(p.n, p.b)), beta_(2.0 * units::pi / p.n)
    {
        a0_ = p.a;
        c0_ = lateral_edge(p);
        const double A = bar_area(p, s);
        ka_ = s.E * A / a0_;
        kc_ = s.E * A / c0_;
        kha_ = s.hinge_stiffness * a0_;
        khc_ = s.hinge_stiffness * c0_;
        auto rest = eval(Jet<2>::variable(c.H, 0), Jet<2>::variable(c.phi, 1), true);
        (void)rest;
    }

    Jet<2> operator()(double H, double phi) const
    {
        return eval(Jet<2>::variable(H, 0), Jet<2>::variable(phi, 1), false);
    }

    double value(double H, double phi) const { return (*this)(H, phi).v; }

    double rest_a() const { return a0_; }
    double rest_c() const { return c0_; }
    double bar_stiffness_a() const { return ka_; }
    double bar_stiffness_c() const { return kc_; }

private:
    Jet<2> eval(const Jet<2>& H, const Jet<2>& phi, bool set_rest) const
    {
        using J = Jet<2>;
        J R2(2.0 * R_ * R_);
        J a = sqrt(H * H + R2 * (1.0 - cos(phi)));
        J c = sqrt(H * H + R2 * (1.0 - cos(beta_ - phi)));
        J U = 0.5 * ka_ * (a - a0_) * (a - a0_) + 0.5 * kc_ * (c - c0_) * (c - c0_);
        if (kha_ > 0 || khc_ > 0 || set_rest) {
            auto ring = [&](const J& z, const J& ang, int i) {
                J t = ang + i * beta_;
                return detail::P3<J>{R_ * cos(t), R_ * sin(t), z};
            };
            J zero(0.0);
            auto B0 = ring(zero, zero, 0), B1 = ring(zero, zero, 1);
            auto T0 = ring(H, phi, 0), T1 = ring(H, phi, 1), Tm = ring(H, phi, -1);
            J da = detail::dihedral3(B0, T0, B1, Tm);
            J dc = detail::dihedral3(B1, T0, B0, T1);
            if (set_rest) {
                da0_ = da.v;
                dc0_ = dc.v;
            } else {
                U += 0.5 * kha_ * (da - da0_) * (da - da0_) + 0.5 * khc_ * (dc - dc0_) * (dc - dc0_);
            }
        }
        return U * static_cast<double>(n_);
    }

    int n_;
    double R_, beta_;
    double a0_, c0_, ka_, kc_, kha_, khc_;
    mutable double da0_ = 0.0, dc0_ = 0.0;
};

struct FeasibleBand {
    double lo, hi;
};

inline FeasibleBand feasible_band(const KreslingParams& p)
{
    return {0.0, std::max(p.a, lateral_edge(p))};
}

// Twist minimizing the layer energy at height H: dense scan, Brent, Newton polish.
inline double optimal_twist(const LayerEnergy& E, double H, int grid = 720)
{
    const double two_pi = 2.0 * units::pi;
    int best = 0;
    double bestU = INFINITY;
    for (int k = 0; k < grid; ++k) {
        double phi = -units::pi + two_pi * k / grid;
        double u = E.value(H, phi);
        if (u < bestU) { bestU = u; best = k; }
    }
    double step = two_pi / grid;
    double c = -units::pi + two_pi * best / grid;
    auto r = boost::math::tools::brent_find_minima([&](double phi) { return E.value(H, phi); }, c - step, c + step,
                                                   std::numeric_limits<double>::digits);
    double phi = r.first;
    for (int it = 0; it < 8; ++it) {
        Jet<2> j = E(H, phi);
        if (!(j.H(1, 1) > 0)) break;
        double dphi = -j.g[1] / j.H(1, 1);
        if (std::abs(dphi) > step) break;
        if (E.value(H, phi + dphi) > j.v + 1e-15 * std::max(1.0, std::abs(j.v))) break;
        phi += dphi;
        if (std::abs(dphi) < 1e-15) break;
    }
    return phi;
}

// Per-layer heights; twists minimize bar energy, mirrored layers get the opposite sign.
inline KreslingState kinematic_state(const Origami& o, const std::vector<double>& heights,
                                     const TrussSettings& s = {})
{
    const KreslingState& rest = o.state;
    require(static_cast<int>(heights.size()) == rest.layers(), ErrorKind::InvalidParams,
            "one height per layer required");
    FeasibleBand band = feasible_band(o.params);
    LayerEnergy E(o.params, o.closure, s);
    std::vector<double> twists;
    for (double H : heights) {
        if (!(H >= band.lo && H <= band.hi))
            fail(ErrorKind::InfeasibleHeight, "layer height " + std::to_string(H) + " outside [" + std::to_string(band.lo)
                                                  + ", " + std::to_string(band.hi) + "]");
        twists.push_back(optimal_twist(E, H));
    }
    for (std::size_t k = 0; k < twists.size(); ++k) twists[k] *= rest.hand[k];
    return make_state(rest.n, rest.R, heights, twists, rest.hand, rest.chirality);
}

inline KreslingState kinematic_state(const Origami& o, double H, const TrussSettings& s = {})
{
    return kinematic_state(o, std::vector<double>(o.state.layers(), H), s);
}

inline double state_energy(const Origami& o, const KreslingState& st, const TrussSettings& s = {})
{
    LayerEnergy E(o.params, o.closure, s);
    double U = 0.0;
    for (int k = 0; k < st.layers(); ++k) {
        double phi = st.twists[k] * st.hand[k];
        if (st.chirality == Chirality::Left) phi = -phi;
        U += E.value(st.heights[k], phi);
    }
    return U;
}

} // namespace metaori::kresling
