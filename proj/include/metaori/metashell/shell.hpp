#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "../mesh/trimesh.hpp"
#include "outline.hpp"

namespace metaori::metashell {

struct ShellOptions {
    double extension = 0.0;               // per-row apex lift for the displayed state, mm
    std::optional<double> open_extension; // per-row stroke to the open state, defaults to 2h
    std::vector<double> extra_levels;     // absolute z levels forced onto every sweep line
};

struct SweepLine {
    double theta = 0;
    std::vector<double> z;
    std::vector<int> inner, outer;
};

struct MetashellSolid {
    TriMesh mesh;
    double open_height = 0, closed_height = 0;
    double height = 0;
    double inner_radius = 0, outer_radius = 0, mid_radius = 0;
    bool zero_clearance = false;
    CellOutline outline;
    std::vector<SweepLine> lines;

    // Vertex ids at height z on every sweep line, ordered by angle.
    std::vector<int> ring_ids(double z, bool inner) const
    {
        std::vector<int> ids;
        for (const SweepLine& L : lines) {
            int hit = -1;
            for (std::size_t m = 0; m < L.z.size(); ++m)
                if (std::abs(L.z[m] - z) < 1e-9) hit = static_cast<int>(m);
            if (hit < 0) fail(ErrorKind::InvariantError, "no shell vertex ring at the requested height");
            ids.push_back(inner ? L.inner[hit] : L.outer[hit]);
        }
        return ids;
    }
};

namespace detail {

struct LineSets {
    double theta;
    std::vector<Interval> lo, hi; // material toward smaller / larger arc length
};

inline std::vector<Interval> column_intervals(const CellOutline& o, double u, Region reg, double ext)
{
    const MetashellParams& p = o.params;
    const double W = p.wall_height, rh = o.row_height + ext;
    std::vector<Interval> v{{0.0, W}};
    for (int k = 0; k < p.rows; ++k) {
        double base = W + k * rh;
        for (const Interval& i : o.intervals(u, reg, ext)) v.push_back({base + i.lo, base + i.hi});
    }
    double top = W + p.rows * rh;
    v.push_back({top, top + W});
    return merge_intervals(v);
}

inline std::vector<int> within(const std::vector<double>& z, const Interval& iv)
{
    std::vector<int> ids;
    for (std::size_t m = 0; m < z.size(); ++m)
        if (z[m] >= iv.lo - 1e-9 && z[m] <= iv.hi + 1e-9) ids.push_back(static_cast<int>(m));
    return ids;
}

} // namespace detail

inline MetashellSolid assemble_metashell(const MetashellParams& p, const ShellOptions& opt = {})
{
    CellOutline o = build_unit_cell_outline(p);
    if (p.depth >= p.mid_radius()) fail(ErrorKind::WrapFailure, "depth must be below the mid-surface radius");
    const double ext = opt.extension;
    require(std::isfinite(ext) && ext > -o.params.delta - 1e-12 && ext < 2.5 * p.h, ErrorKind::InvalidParams,
            "extension outside the displayable range");

    MetashellSolid s;
    s.outline = o;
    s.mid_radius = p.mid_radius();
    s.inner_radius = p.inner_radius();
    s.outer_radius = p.outer_radius();
    s.zero_clearance = o.zero_clearance;
    s.closed_height = p.height();
    s.open_height = s.closed_height + p.rows * opt.open_extension.value_or(2.0 * p.h);
    s.height = 2.0 * p.wall_height + p.rows * (o.row_height + ext);

    // sweep lines around the circumference, mirror-symmetric in every cell
    std::vector<detail::LineSets> sets;
    const auto& H = o.half_lines;
    const int K = static_cast<int>(H.size());
    const double cell_angle = 2.0 * units::pi / p.cols;
    for (int j = 0; j < p.cols; ++j) {
        for (int k = 0; k < K; ++k) {
            const OutlineLine& L = H[k];
            sets.push_back({cell_angle * (j + L.u / o.pitch), detail::column_intervals(o, L.u, L.minus, ext),
                            detail::column_intervals(o, L.u, L.plus, ext)});
        }
        for (int k = K - 2; k >= 1; --k) {
            const OutlineLine& L = H[k];
            sets.push_back({cell_angle * (j + 1 - L.u / o.pitch), detail::column_intervals(o, L.u, L.plus, ext),
                            detail::column_intervals(o, L.u, L.minus, ext)});
        }
    }

    const int N = static_cast<int>(sets.size());
    std::vector<int> offset(N + 1, 0);
    s.lines.resize(N);
    for (int k = 0; k < N; ++k) {
        std::vector<double> z;
        for (const auto* side : {&sets[k].lo, &sets[k].hi})
            for (const Interval& i : *side) {
                z.push_back(i.lo);
                z.push_back(i.hi);
            }
        for (double lv : opt.extra_levels)
            for (const auto* side : {&sets[k].lo, &sets[k].hi})
                for (const Interval& i : *side)
                    if (lv > i.lo + 1e-9 && lv < i.hi - 1e-9) z.push_back(lv);
        std::sort(z.begin(), z.end());
        std::vector<double> u;
        for (double v : z)
            if (u.empty() || v - u.back() > 1e-9) u.push_back(v);
        s.lines[k].theta = sets[k].theta;
        s.lines[k].z = std::move(u);
        offset[k + 1] = offset[k] + static_cast<int>(s.lines[k].z.size());
    }

    // planar triangulation in (line, z) index space
    std::vector<Tri> planar;
    for (int k = 0; k < N; ++k) {
        const int kb = (k + 1) % N;
        const auto& Ia = sets[k].hi;
        const auto& Ib = sets[kb].lo;
        if (Ia.size() != Ib.size())
            fail(ErrorKind::InvariantError, "sweep strip changes topology at line " + std::to_string(k) + "; refine sample_spacing");
        const auto& za = s.lines[k].z;
        const auto& zb = s.lines[kb].z;
        for (std::size_t q = 0; q < Ia.size(); ++q) {
            auto A = detail::within(za, Ia[q]);
            auto B = detail::within(zb, Ib[q]);
            auto ta = [&](int i) { return (za[A[i]] - Ia[q].lo) / (Ia[q].hi - Ia[q].lo); };
            auto tb = [&](int j) { return (zb[B[j]] - Ib[q].lo) / (Ib[q].hi - Ib[q].lo); };
            int i = 0, j = 0;
            const int na = static_cast<int>(A.size()) - 1, nb = static_cast<int>(B.size()) - 1;
            while (i < na || j < nb) {
                bool adv_a = j == nb || (i < na && ta(i + 1) <= tb(j + 1));
                if (adv_a) {
                    planar.push_back({offset[k] + A[i], offset[kb] + B[j], offset[k] + A[i + 1]});
                    ++i;
                } else {
                    planar.push_back({offset[k] + A[i], offset[kb] + B[j], offset[kb] + B[j + 1]});
                    ++j;
                }
            }
        }
    }

    TriMesh& m = s.mesh;
    const double ri = s.inner_radius, ro = s.outer_radius;
    std::vector<int> in_id(offset[N]), out_id(offset[N]);
    for (int k = 0; k < N; ++k) {
        SweepLine& L = s.lines[k];
        const double c = std::cos(L.theta), sn = std::sin(L.theta);
        for (std::size_t q = 0; q < L.z.size(); ++q) {
            int pid = offset[k] + static_cast<int>(q);
            in_id[pid] = m.add_vertex(Vec3(ri * c, ri * sn, L.z[q]));
            out_id[pid] = m.add_vertex(Vec3(ro * c, ro * sn, L.z[q]));
            L.inner.push_back(in_id[pid]);
            L.outer.push_back(out_id[pid]);
        }
    }
    std::map<std::pair<int, int>, int> edges;
    for (const Tri& t : planar) {
        m.add_triangle(out_id[t[0]], out_id[t[1]], out_id[t[2]]);
        m.add_triangle(in_id[t[0]], in_id[t[2]], in_id[t[1]]);
        for (int e = 0; e < 3; ++e) ++edges[{t[e], t[(e + 1) % 3]}];
    }
    for (const auto& [e, count] : edges) {
        if (edges.count({e.second, e.first})) continue;
        if (count != 1) fail(ErrorKind::InvariantError, "sweep produced a non-manifold planar edge");
        int pp = e.first, qq = e.second;
        m.add_quad(out_id[qq], out_id[pp], in_id[pp], in_id[qq]);
    }
    return s;
}

// Arc length of one cell on the wrapped mid-surface.
inline double cell_arc_length(const MetashellParams& p) { return p.mid_radius() * 2.0 * units::pi / p.cols; }

} // namespace metaori::metashell
