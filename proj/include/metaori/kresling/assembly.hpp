#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pattern.hpp"

namespace metaori::kresling {

// Axial stack of regular n-gons. Layer k spans ring k to ring k + 1; hand[k] is +1
// for an as-constructed layer and -1 for a mirrored one.
struct KreslingState {
    int n = 6;
    double R = 0.0;
    Chirality chirality = Chirality::Right;
    std::vector<double> heights;
    std::vector<double> twists;
    std::vector<int> hand;
    std::vector<std::vector<Vec3>> rings;

    int layers() const { return static_cast<int>(heights.size()); }
    double total_height() const
    {
        double h = 0;
        for (double x : heights) h += x;
        return h;
    }
    double net_twist() const
    {
        double t = 0;
        for (double x : twists) t += x;
        return t;
    }
    std::vector<Vec3> vertex_coords() const
    {
        std::vector<Vec3> v;
        for (const auto& r : rings) v.insert(v.end(), r.begin(), r.end());
        return v;
    }
};

inline KreslingState make_state(int n, double R, const std::vector<double>& heights, const std::vector<double>& twists,
                                const std::vector<int>& hand, Chirality chirality = Chirality::Right)
{
    require(heights.size() == twists.size() && heights.size() == hand.size() && !heights.empty(),
            ErrorKind::InvalidParams, "state needs matching per-layer heights, twists and hands");
    KreslingState s;
    s.n = n;
    s.R = R;
    s.chirality = chirality;
    s.heights = heights;
    s.twists = twists;
    s.hand = hand;
    const double beta = 2.0 * units::pi / n;
    const double sign = chirality == Chirality::Right ? 1.0 : -1.0;
    double z = 0.0, ang = 0.0;
    for (std::size_t k = 0; k <= heights.size(); ++k) {
        std::vector<Vec3> ring(n);
        for (int i = 0; i < n; ++i) {
            double a = ang + i * beta;
            ring[i] = Vec3(R * std::cos(a), sign * R * std::sin(a), z);
        }
        s.rings.push_back(std::move(ring));
        if (k < heights.size()) {
            z += heights[k];
            ang += twists[k];
        }
    }
    if (chirality == Chirality::Left)
        for (double& t : s.twists) t = -t;
    return s;
}

// Mirrored pairs with uniform height and twist magnitude.
inline KreslingState uniform_state(int n, double R, int levels, double H, double phi,
                                   Chirality chirality = Chirality::Right)
{
    std::vector<double> h, t;
    std::vector<int> hand;
    for (int l = 0; l < levels; ++l) {
        h.push_back(H); t.push_back(phi); hand.push_back(1);
        h.push_back(H); t.push_back(-phi); hand.push_back(-1);
    }
    return make_state(n, R, h, t, hand, chirality);
}

inline int ring_vertex(int n, int k, int i) { return k * n + ((i % n) + n) % n; }

// Lateral faces indexed into vertex_coords(), wound outward.
inline std::vector<Tri> lateral_faces(const KreslingState& s)
{
    std::vector<Tri> f;
    const int n = s.n;
    for (int k = 0; k < s.layers(); ++k) {
        for (int i = 0; i < n; ++i) {
            if (s.hand[k] > 0) {
                int B0 = ring_vertex(n, k, i), B1 = ring_vertex(n, k, i + 1);
                int T0 = ring_vertex(n, k + 1, i), Tm = ring_vertex(n, k + 1, i - 1);
                f.push_back({B0, B1, T0});
                f.push_back({B0, T0, Tm});
            } else {
                int U0 = ring_vertex(n, k + 1, i), U1 = ring_vertex(n, k + 1, i + 1);
                int L0 = ring_vertex(n, k, i), Lm = ring_vertex(n, k, i - 1);
                f.push_back({U0, L0, U1});
                f.push_back({U0, Lm, L0});
            }
        }
    }
    if (s.chirality == Chirality::Left)
        for (Tri& t : f) std::swap(t[1], t[2]);
    return f;
}

inline TriMesh lateral_surface(const KreslingState& s)
{
    TriMesh m;
    m.vertices = s.vertex_coords();
    m.triangles = lateral_faces(s);
    return m;
}

// Lateral surface closed by fans over the end polygons.
inline TriMesh closed_surface(const KreslingState& s)
{
    TriMesh m = lateral_surface(s);
    const int n = s.n;
    const int top = s.layers();
    int cb = m.add_vertex(Vec3(0, 0, 0));
    int ct = m.add_vertex(Vec3(0, 0, s.total_height()));
    const int d = s.chirality == Chirality::Right ? 1 : -1;
    for (int i = 0; i < n; ++i) {
        m.add_triangle(cb, ring_vertex(n, 0, i + d), ring_vertex(n, 0, i));
        m.add_triangle(ct, ring_vertex(n, top, i), ring_vertex(n, top, i + d));
    }
    return m;
}

struct Closure {
    double alpha_requested = 0.0;
    double alpha = 0.0;     // realized dihedral
    double H = 0.0;         // layer height
    double phi = 0.0;       // layer twist
    double gap = 0.0;       // mismatch of shared vertices between neighbouring copies
};

// Signed radial miss of the top vertex of a seated unit.
inline double closure_residual(const FlatPattern& pat, double alpha)
{
    auto v = detail::seat_unit(pat, alpha);
    const double R = circumradius(pat.n, pat.b);
    return std::hypot(v[2].x(), v[2].y()) - R;
}

inline double closure_gap(const FlatPattern& pat, const std::array<Vec3, 4>& v)
{
    const double R = circumradius(pat.n, pat.b);
    const double beta = 2.0 * units::pi / pat.n;
    Eigen::AngleAxisd rot(beta, Vec3::UnitZ());
    double g = std::abs(std::hypot(v[2].x(), v[2].y()) - R);
    g = std::max(g, std::abs(std::hypot(v[3].x(), v[3].y()) - R));
    g = std::max(g, (rot * v[3] - v[2]).norm());
    return g;
}

inline Closure solve_closure(const FlatPattern& pat, double alpha_requested)
{
    const int samples = 2000;
    std::vector<double> al(samples + 1), r(samples + 1);
    for (int k = 0; k <= samples; ++k) {
        al[k] = units::pi * (k + 1e-3) / (samples + 1e-3);
        if (k == samples) al[k] = units::pi;
        r[k] = closure_residual(pat, al[k]);
    }
    std::vector<double> roots;
    for (int k = 0; k < samples; ++k) {
        if (r[k] == 0.0) { roots.push_back(al[k]); continue; }
        if ((r[k] < 0) == (r[k + 1] < 0) && r[k + 1] != 0.0) continue;
        double lo = al[k], hi = al[k + 1], rlo = r[k];
        while (hi - lo > 1e-10) {
            double mid = 0.5 * (lo + hi);
            double rm = closure_residual(pat, mid);
            if ((rm < 0) == (rlo < 0)) { lo = mid; rlo = rm; } else hi = mid;
        }
        roots.push_back(0.5 * (lo + hi));
    }
    if (r[samples] == 0.0) roots.push_back(al[samples]);
    std::sort(roots.begin(), roots.end(), [&](double x, double y) {
        return std::abs(x - alpha_requested) < std::abs(y - alpha_requested);
    });
    for (double a : roots) {
        auto v = detail::seat_unit(pat, a);
        double gap = closure_gap(pat, v);
        if (gap > 1e-6 || v[2].z() <= 0) continue;
        Closure c;
        c.alpha_requested = alpha_requested;
        c.alpha = a;
        c.H = v[2].z();
        c.phi = std::atan2(v[2].y(), v[2].x());
        c.gap = gap;
        return c;
    }
    fail(ErrorKind::ClosureFailure, "no dihedral in (0, pi] closes the ring");
}

struct Origami {
    KreslingParams params;
    FlatPattern pattern;
    Closure closure;
    KreslingState state;
    std::vector<Tri> faces;
    double symmetry_residual = 0.0;

    TriMesh surface() const
    {
        TriMesh m;
        m.vertices = state.vertex_coords();
        m.triangles = faces;
        return m;
    }
};

// Largest distance from a rotated vertex to its nearest counterpart.
inline double rotation_residual(const std::vector<Vec3>& pts, double angle)
{
    Eigen::AngleAxisd rot(angle, Vec3::UnitZ());
    double worst = 0.0;
    for (const Vec3& p : pts) {
        Vec3 q = rot * p;
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& o : pts) best = std::min(best, (o - q).norm());
        worst = std::max(worst, best);
    }
    return worst;
}

inline Origami assemble_origami(const std::array<FoldedUnit, 2>& pair, const KreslingParams& params)
{
    validate(params);
    Origami o;
    o.params = params;
    o.pattern = build_flat_pattern(params);
    FlatPattern right = o.pattern;
    right.chirality = Chirality::Right;
    o.closure = solve_closure(right, pair[0].dihedral > 0 ? pair[0].dihedral : params.alpha);
    const double R = circumradius(params.n, params.b);
    o.state = uniform_state(params.n, R, params.levels, o.closure.H, o.closure.phi, params.chirality);
    o.faces = lateral_faces(o.state);

    // n copies of the closed unit, checked against the ring the state uses
    auto unit = detail::seat_unit(right, o.closure.alpha);
    double resid = o.closure.gap;
    const double beta = 2.0 * units::pi / params.n;
    for (int i = 0; i < params.n; ++i) {
        Eigen::AngleAxisd rot(i * beta, Vec3::UnitZ());
        Vec3 t = rot * unit[2];
        Vec3 s = o.state.rings[1][i];
        if (params.chirality == Chirality::Left) s.y() = -s.y();
        resid = std::max(resid, (t - s).norm());
    }
    o.symmetry_residual = std::max(resid, rotation_residual(o.state.vertex_coords(), beta));
    return o;
}

inline Origami build_origami(const KreslingParams& params)
{
    FlatPattern pat = build_flat_pattern(params);
    FlatPattern right = pat;
    right.chirality = Chirality::Right;
    Closure c = solve_closure(right, params.alpha);
    FoldedUnit unit = fold_basic_unit(pat, c.alpha, params.t_face);
    return assemble_origami(mirror_and_stack(unit), params);
}

// Pattern that closes into layers of height H and twist phi.
inline KreslingParams design_for_state(int n, double b, double H, double phi, double t_face, int levels)
{
    const double R = circumradius(n, b);
    const double beta = 2.0 * units::pi / n;
    double a2 = H * H + 2 * R * R * (1 - std::cos(phi));
    double c2 = H * H + 2 * R * R * (1 - std::cos(beta - phi));
    KreslingParams p;
    p.n = n;
    p.b = b;
    p.a = std::sqrt(a2);
    p.theta = std::acos((a2 + b * b - c2) / (2 * p.a * b));
    p.t_face = t_face;
    p.levels = levels;
    // dihedral of the closed unit
    Vec3 B0(R, 0, 0), B1(R * std::cos(beta), R * std::sin(beta), 0);
    Vec3 T0(R * std::cos(phi), R * std::sin(phi), H), Tm(R * std::cos(phi - beta), R * std::sin(phi - beta), H);
    p.alpha = detail::dihedral({B0, B1, T0, Tm});
    return p;
}

} // namespace metaori::kresling
