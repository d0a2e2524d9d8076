#pragma once

#include <cmath>
#include <string>

#include "../error.hpp"
#include "../units.hpp"

namespace metaori::kresling {

enum class Chirality { Right, Left };

inline const char* to_string(Chirality c) { return c == Chirality::Right ? "right" : "left"; }

inline Chirality opposite(Chirality c) { return c == Chirality::Right ? Chirality::Left : Chirality::Right; }

struct KreslingParams {
    int n = 6;
    double a = 0.0;       // inclined crease length, mm
    double b = 0.0;       // polygon edge, mm
    double theta = 0.0;   // pattern inclination, rad
    double alpha = 0.0;   // requested dihedral, rad
    double t_face = 0.0;  // mm
    int levels = 1;       // mirrored pairs
    Chirality chirality = Chirality::Right;
};

inline double circumradius(int n, double b) { return b / (2.0 * std::sin(units::pi / n)); }

// Third pattern edge (lateral crease between neighbouring units).
inline double lateral_edge(const KreslingParams& p)
{
    return std::sqrt(p.a * p.a + p.b * p.b - 2.0 * p.a * p.b * std::cos(p.theta));
}

inline double pattern_triangle_area(const KreslingParams& p) { return 0.5 * p.a * p.b * std::sin(p.theta); }

inline void validate(const KreslingParams& p)
{
    require(p.n >= 3, ErrorKind::InvalidParams, "n must be >= 3");
    require(p.a > 0 && std::isfinite(p.a), ErrorKind::InvalidParams, "a must be > 0");
    require(p.b > 0 && std::isfinite(p.b), ErrorKind::InvalidParams, "b must be > 0");
    require(p.t_face > 0 && std::isfinite(p.t_face), ErrorKind::InvalidParams, "t_face must be > 0");
    require(p.levels >= 1, ErrorKind::InvalidParams, "levels must be >= 1");
    require(p.theta >= 0 && p.theta <= units::pi, ErrorKind::InvalidParams, "theta must lie in (0, pi)");
    require(p.alpha > 0 && p.alpha <= units::pi, ErrorKind::InvalidParams, "alpha must lie in (0, pi]");
    if (pattern_triangle_area(p) < 1e-9)
        fail(ErrorKind::DegeneratePattern, "pattern triangle area below 1e-9 mm^2");
    double shortest = std::min({p.a, p.b, lateral_edge(p)});
    require(p.t_face < shortest, ErrorKind::InvalidParams, "t_face must be smaller than the shortest pattern edge");
}

} // namespace metaori::kresling
