#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "../error.hpp"
#include "../units.hpp"

namespace metaori::metashell {

enum class FilletProfile { Circular, Linear };

struct MetashellParams {
    double c = 12.50;            // support column width, mm
    double l = 22.50;            // curved beam span, mm
    double t = 1.25;             // beam thickness, mm
    double h = 9.40;             // beam apex rise, mm
    double r = 7.60;             // column/wall junction fillet radius, mm
    double delta = 0.63;         // column/ring clearance, mm
    double wall_height = 12.5;   // mm, added above and below
    int rows = 1;
    int cols = 4;
    double depth = 5.0;          // radial thickness, mm
    std::vector<double> infill_per_row{1.0};

    double beam_gap = 0.0;       // centerline spacing of the beam pair, 0 -> 2t
    double shuttle_width = 0.0;  // 0 -> 2t
    double ring_thickness = 0.0; // 0 -> t
    double apex_clearance = 0.0; // lower beam apex above the row floor, 0 -> t
    double pitch_compression = 1.0;
    double sample_spacing = 0.5; // mm between sweep lines
    FilletProfile fillet = FilletProfile::Circular;

    double pitch() const { return l + c; }
    double row_height() const { return 0.5 * (l + c); }
    double Q() const { return h / t; }
    double gap() const { return beam_gap > 0 ? beam_gap : 2.0 * t; }
    double shuttle() const { return shuttle_width > 0 ? shuttle_width : 2.0 * t; }
    double ring() const { return ring_thickness > 0 ? ring_thickness : t; }
    double apex() const { return apex_clearance > 0 ? apex_clearance : t; }
    double height() const { return rows * row_height() + 2.0 * wall_height; }
    double mid_radius() const { return cols * pitch() * pitch_compression / (2.0 * units::pi); }
    double inner_radius() const { return mid_radius() - 0.5 * depth; }
    double outer_radius() const { return mid_radius() + 0.5 * depth; }
};

// Clamp-relative cosine rise; x in [-l/2, 0].
inline double beam_profile(double x, double h, double l)
{
    if (!(x >= -0.5 * l && x <= 0.0)) fail(ErrorKind::OutOfDomain, "beam_profile: x outside [-l/2, 0]");
    return 0.5 * h * (1.0 - std::cos(2.0 * units::pi * x / l));
}

inline void validate(const MetashellParams& p)
{
    for (double v : {p.c, p.l, p.t, p.h, p.r, p.wall_height, p.depth, p.sample_spacing, p.pitch_compression})
        require(std::isfinite(v) && v > 0, ErrorKind::InvalidParams, "metashell lengths must be > 0");
    require(std::isfinite(p.delta) && p.delta >= 0, ErrorKind::InvalidParams, "delta must be >= 0");
    require(p.cols >= 2, ErrorKind::InvalidParams, "cols must be >= 2");
    require(p.rows >= 1, ErrorKind::InvalidParams, "rows must be >= 1");
    require(static_cast<int>(p.infill_per_row.size()) == p.rows, ErrorKind::InvalidParams,
            "infill_per_row needs one entry per row");
    for (double f : p.infill_per_row)
        require(f > 0 && f <= 1, ErrorKind::InvalidParams, "infill must lie in (0, 1]");
}

struct Interval {
    double lo, hi;
};

inline std::vector<Interval> merge_intervals(std::vector<Interval> v, double tol = 1e-9)
{
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const Interval& i : v) {
        if (!out.empty() && i.lo <= out.back().hi + tol)
            out.back().hi = std::max(out.back().hi, i.hi);
        else
            out.push_back(i);
    }
    return out;
}

enum class Region { Column, Span, Shuttle };

// One sweep line of the half cell; u is the distance from the column center.
struct OutlineLine {
    double u;
    Region minus, plus; // region on the side of smaller / larger u
};

// Unit cell in the unrolled plane: columns straddle the cell edges, two stacked
// cosine beams arch down from the columns, a shuttle joins the lower apex to the ring.
struct CellOutline {
    MetashellParams params;
    double pitch = 0, row_height = 0;
    double clamp_z = 0;      // lower beam centerline at the clamps
    double column_top = 0;
    double clearance = 0;    // largest admissible delta
    bool zero_clearance = false;
    std::vector<OutlineLine> half_lines;

    double span_x(double u) const { return u - 0.5 * params.c; }

    // Fillet height at distance x from the column face.
    double fillet(double x) const
    {
        const double r = params.r;
        if (x >= r) return 0.0;
        if (params.fillet == FilletProfile::Linear) return r - x;
        double d = r - x;
        return r - std::sqrt(std::max(0.0, r * r - d * d));
    }

    // Beam centerline drop below the clamp and the vertical half thickness.
    void beam(double x, double extension, double& drop, double& half) const
    {
        const double hh = params.h - extension, l = params.l, k = 2.0 * units::pi / l;
        drop = 0.5 * hh * (1.0 - std::cos(k * x));
        double slope = 0.5 * hh * k * std::sin(k * x);
        half = 0.5 * params.t * std::sqrt(1.0 + slope * slope);
    }

    // Material intervals of one row in row-local z for a region at distance u.
    std::vector<Interval> intervals(double u, Region reg, double extension = 0.0) const
    {
        const double top = row_height + extension, ring = params.ring();
        std::vector<Interval> v;
        v.push_back({top - ring, top});
        if (reg == Region::Column) {
            v.push_back({0.0, column_top});
            return merge_intervals(v);
        }
        const double x = std::min(span_x(u), 0.5 * params.l);
        double drop, half;
        beam(x, extension, drop, half);
        const double y1 = clamp_z - drop, y2 = y1 + params.gap();
        double f = fillet(x);
        if (f > 0) v.push_back({0.0, f});
        if (reg == Region::Shuttle) {
            v.push_back({y1 - half, top});
        } else {
            v.push_back({y1 - half, y1 + half});
            v.push_back({y2 - half, y2 + half});
        }
        return merge_intervals(v);
    }

    Region region(double u, int side) const
    {
        const double cf = 0.5 * params.c, sf = 0.5 * pitch - 0.5 * params.shuttle();
        if (u < cf || (u == cf && side < 0)) return Region::Column;
        if (u > sf || (u == sf && side > 0)) return Region::Shuttle;
        return Region::Span;
    }

    // Membership test in row-local coordinates; s in [0, pitch).
    bool contains(double s, double z) const
    {
        double u = s <= 0.5 * pitch ? s : pitch - s;
        for (const Interval& i : intervals(u, region(u, 1)))
            if (z >= i.lo && z <= i.hi) return true;
        return false;
    }
};

inline std::vector<double> subdivide(double a, double b, double ds)
{
    int n = std::max(1, static_cast<int>(std::ceil((b - a) / ds - 1e-9)));
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / n);
    return v;
}

inline CellOutline build_unit_cell_outline(const MetashellParams& p)
{
    validate(p);
    if (p.t >= p.h) fail(ErrorKind::GeometryConflict, "beam thickness must be below the apex rise");

    CellOutline o;
    o.params = p;
    o.pitch = p.pitch();
    o.row_height = p.row_height();
    o.clamp_z = p.apex() + 0.5 * p.t + p.h;
    o.column_top = o.row_height - p.ring() - p.delta;
    o.clearance = o.row_height - p.ring() - p.apex() - p.t - p.h - p.gap();
    o.zero_clearance = p.delta == 0.0;

    if (p.delta >= o.clearance)
        fail(ErrorKind::GeometryConflict, "delta leaves no room for the beams between column top and ring");
    if (p.r > 0.5 * (p.l - p.shuttle()))
        fail(ErrorKind::GeometryConflict, "fillets overlap across the span");

    // beam pair must stay apart and clear of the fillet
    const int probes = 2000;
    for (int i = 0; i <= probes; ++i) {
        double x = 0.5 * p.l * i / probes;
        double drop, half;
        o.beam(x, 0.0, drop, half);
        if (p.gap() - 2.0 * half <= 0)
            fail(ErrorKind::GeometryConflict, "beam pair overlaps; increase beam_gap");
        if (x < p.r && o.clamp_z - drop - half <= o.fillet(x))
            fail(ErrorKind::GeometryConflict, "fillet reaches the lower beam");
    }

    const double cf = 0.5 * p.c, sf = 0.5 * o.pitch - 0.5 * p.shuttle(), mid = 0.5 * o.pitch;
    std::vector<double> us;
    for (double u : subdivide(0.0, cf, p.sample_spacing)) us.push_back(u);
    double fe = std::min(cf + p.r, sf);
    for (double u : subdivide(cf, fe, p.sample_spacing)) us.push_back(u);
    if (fe < sf)
        for (double u : subdivide(fe, sf, p.sample_spacing)) us.push_back(u);
    for (double u : subdivide(sf, mid, p.sample_spacing)) us.push_back(u);
    us.push_back(mid);
    for (double u : us) o.half_lines.push_back({u, o.region(u, -1), o.region(u, 1)});
    return o;
}

// Area of the row cell in the unrolled plane, by the sweep lines.
inline double outline_area(const CellOutline& o)
{
    auto len = [](const std::vector<Interval>& v) {
        double s = 0;
        for (const Interval& i : v) s += i.hi - i.lo;
        return s;
    };
    double area = 0;
    const auto& L = o.half_lines;
    for (std::size_t k = 0; k + 1 < L.size(); ++k) {
        double a = len(o.intervals(L[k].u, L[k].plus)), b = len(o.intervals(L[k + 1].u, L[k + 1].minus));
        area += 0.5 * (a + b) * (L[k + 1].u - L[k].u);
    }
    return 2.0 * area;
}

} // namespace metaori::metashell
