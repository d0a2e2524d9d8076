#pragma once

#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <vector>

#include "../mesh/trimesh.hpp"
#include "params.hpp"

namespace metaori::kresling {

enum class Crease { Mountain, Valley, Boundary };

inline const char* to_string(Crease c)
{
    switch (c) {
    case Crease::Mountain: return "mountain";
    case Crease::Valley: return "valley";
    default: return "boundary";
    }
}

struct PatternEdge {
    int i, j;
    Crease label;
};

// P0, P1 bottom edge; P2, P3 top edge. F1 = (P0, P1, P2), F2 = (P0, P2, P3).
struct FlatPattern {
    std::array<Vec2, 4> points;
    std::array<Tri, 2> faces{{{0, 1, 2}, {0, 2, 3}}};
    std::vector<PatternEdge> edges;
    int n = 6;
    double b = 0.0;
    Chirality chirality = Chirality::Right;

    double edge_length(int i, int j) const { return (points[i] - points[j]).norm(); }
};

inline FlatPattern build_flat_pattern(const KreslingParams& p)
{
    validate(p);
    FlatPattern f;
    f.n = p.n;
    f.b = p.b;
    f.chirality = p.chirality;
    f.points[0] = Vec2(0, 0);
    f.points[1] = Vec2(p.b, 0);
    f.points[2] = p.a * Vec2(std::cos(p.theta), std::sin(p.theta));
    f.points[3] = f.points[2] - Vec2(p.b, 0);
    f.edges = {
        {0, 2, Crease::Mountain}, // diagonal a
        {1, 2, Crease::Valley},   // lateral c, shared with the next unit
        {0, 3, Crease::Valley},   // lateral c, shared with the previous unit
        {3, 2, Crease::Valley},   // top edge, interface with the mirrored half
        {0, 1, Crease::Boundary}, // bottom polygon edge
    };
    return f;
}

struct FoldedUnit {
    // Images of P0..P3: B0, B1 on the bottom polygon, T0 and T(-1) on the top one.
    std::array<Vec3, 4> vertices;
    Chirality chirality = Chirality::Right;
    double dihedral = 0.0;
    double t_face = 0.0;
    int n = 6;
    double b = 0.0;

    double top_height() const { return vertices[2].z(); }
};

namespace detail {

// Dihedral between F1 and F2 along the diagonal P0-P2.
inline double dihedral(const std::array<Vec3, 4>& v)
{
    Vec3 u = (v[2] - v[0]).normalized();
    Vec3 w1 = v[1] - v[0];
    Vec3 w3 = v[3] - v[0];
    w1 -= w1.dot(u) * u;
    w3 -= w3.dot(u) * u;
    return std::atan2(w1.cross(w3).norm(), w1.dot(w3));
}

// Distance from a point to the line through a and b.
inline double line_distance(const Vec3& x, const Vec3& a, const Vec3& b)
{
    Vec3 u = (b - a).normalized();
    Vec3 r = x - a;
    return (r - r.dot(u) * u).norm();
}

} // namespace detail

namespace detail {

// F1 stays in the pattern plane; F2 rotates about the diagonal. The folded pair is
// then seated with P0, P1 on the bottom n-gon (z = 0) and rotated about that edge
// until both top vertices share one height.
inline std::array<Vec3, 4> seat_unit(const FlatPattern& pat, double alpha, std::array<Vec3, 4>* local = nullptr)
{
    std::array<Vec3, 4> L;
    for (int i = 0; i < 4; ++i) L[i] = Vec3(pat.points[i].x(), pat.points[i].y(), 0.0);
    Vec3 axis = (L[2] - L[0]).normalized();
    L[3] = L[0] + Eigen::AngleAxisd(alpha - units::pi, axis) * (L[3] - L[0]);
    if (local) *local = L;

    const double R = circumradius(pat.n, pat.b);
    const double beta = 2.0 * units::pi / pat.n;
    Vec3 B0(R, 0, 0), B1(R * std::cos(beta), R * std::sin(beta), 0);
    Vec3 e1 = (B1 - B0) / pat.b;
    Vec3 g2(0, 0, 1);
    Vec3 g1 = g2.cross(e1);

    double dy = L[2].y() - L[3].y(), dz = L[2].z() - L[3].z();
    double psi = std::atan2(-dz, dy);
    if (L[2].y() * std::sin(psi) + L[2].z() * std::cos(psi) < 0) psi += units::pi;
    const double c = std::cos(psi), s = std::sin(psi);

    std::array<Vec3, 4> out;
    for (int i = 0; i < 4; ++i) {
        double y = L[i].y() * c - L[i].z() * s;
        double z = L[i].y() * s + L[i].z() * c;
        out[i] = B0 + L[i].x() * e1 + y * g1 + z * g2;
    }
    out[0] = B0;
    out[1] = B1;
    out[3].z() = out[2].z();
    return out;
}

} // namespace detail

inline FoldedUnit fold_basic_unit(const FlatPattern& pat, double alpha, double t_face)
{
    require(alpha > 0 && alpha <= units::pi, ErrorKind::InvalidParams, "alpha must lie in (0, pi]");
    require(t_face > 0, ErrorKind::InvalidParams, "t_face must be > 0");

    std::array<Vec3, 4> L;
    FoldedUnit u;
    u.vertices = detail::seat_unit(pat, alpha, &L);
    double h1 = detail::line_distance(L[1], L[0], L[2]);
    double h3 = detail::line_distance(L[3], L[0], L[2]);
    if (0.5 * t_face >= std::min(h1, h3) * std::sin(0.5 * alpha))
        fail(ErrorKind::InfeasibleFold, "faces interpenetrate at this dihedral and thickness");

    u.dihedral = detail::dihedral(u.vertices);
    u.t_face = t_face;
    u.n = pat.n;
    u.b = pat.b;
    u.chirality = Chirality::Right;
    if (pat.chirality == Chirality::Left) {
        for (Vec3& v : u.vertices) v.y() = -v.y();
        u.chirality = Chirality::Left;
    }
    return u;
}

// Reflection through the horizontal plane at the unit's top.
inline std::array<FoldedUnit, 2> mirror_and_stack(const FoldedUnit& unit)
{
    FoldedUnit m = unit;
    double top = unit.top_height();
    for (Vec3& v : m.vertices) v.z() = 2.0 * top - v.z();
    m.vertices[2].z() = top;
    m.vertices[3].z() = top;
    m.chirality = opposite(unit.chirality);
    return {unit, m};
}

} // namespace metaori::kresling
