#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "../kresling/solid.hpp"
#include "../mesh/trimesh.hpp"
#include "../metashell/shell.hpp"

namespace metaori::integrate {

struct IntegrateOptions {
    double port_diameter = 4.0;  // mm, 0 seals the cavity
    double lid_thickness = 2.0;  // mm
    double clearance = 0.5;      // minimum radial gap origami/shell, mm
    int port_segments = 32;
};

struct MetaOriAssembly {
    metashell::MetashellSolid shell;
    kresling::OrigamiSolid origami;  // translated to its seat between the lids
    double lid_thickness = 0, port_diameter = 0;
    bool inflatable = false;
    double bottom_lid_volume = 0, top_lid_volume = 0;
    TriMesh mesh;

    double cavity_volume() const { return signed_volume(origami.cavity_mesh); }
    double lid_volume() const { return bottom_lid_volume + top_lid_volume; }
};

namespace detail {

inline double polygon_area(const TriMesh& m, const std::vector<int>& ring)
{
    double a = 0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& p = m.vertices[ring[i]];
        const Vec3& q = m.vertices[ring[(i + 1) % n]];
        a += p.x() * q.y() - p.y() * q.x();
    }
    return 0.5 * a;
}

// Angular zipper between an inner and an outer counter-clockwise ring at one height.
inline void stitch_annulus(TriMesh& m, const std::vector<int>& inner, const std::vector<int>& outer, bool up)
{
    auto unwrap = [&](const std::vector<int>& ring, std::vector<int>& order, std::vector<double>& ang) {
        const int n = static_cast<int>(ring.size());
        int start = 0;
        std::vector<double> a(n);
        for (int i = 0; i < n; ++i) {
            const Vec3& v = m.vertices[ring[i]];
            a[i] = std::atan2(v.y(), v.x());
            if (a[i] < 0) a[i] += 2 * units::pi;
            if (a[i] < a[start]) start = i;
        }
        for (int k = 0; k <= n; ++k) {
            int i = (start + k) % n;
            order.push_back(ring[i]);
            double v = a[i];
            while (k > 0 && v <= ang.back()) v += 2 * units::pi;
            ang.push_back(v);
        }
    };
    std::vector<int> A, B;
    std::vector<double> aa, ab;
    unwrap(inner, A, aa);
    unwrap(outer, B, ab);
    const int na = static_cast<int>(inner.size()), nb = static_cast<int>(outer.size());
    int i = 0, j = 0;
    auto tri = [&](int x, int y, int z) {
        if (up)
            m.add_triangle(x, y, z);
        else
            m.add_triangle(x, z, y);
    };
    while (i < na || j < nb) {
        bool adv_a = j == nb || (i < na && aa[i + 1] < ab[j + 1]);
        if (adv_a) {
            tri(A[i], B[j], A[i + 1]);
            ++i;
        } else {
            tri(A[i], B[j], B[j + 1]);
            ++j;
        }
    }
}

inline void fan(TriMesh& m, const std::vector<int>& ring, double z, bool up)
{
    int c = m.add_vertex(Vec3(0, 0, z));
    const int n = static_cast<int>(ring.size());
    for (int i = 0; i < n; ++i) {
        if (up)
            m.add_triangle(c, ring[i], ring[(i + 1) % n]);
        else
            m.add_triangle(c, ring[(i + 1) % n], ring[i]);
    }
}

inline std::vector<int> circle(TriMesh& m, double r, double z, int segments)
{
    std::vector<int> ids;
    for (int k = 0; k < segments; ++k) {
        double a = 2 * units::pi * (k + 0.5) / segments;
        ids.push_back(m.add_vertex(Vec3(r * std::cos(a), r * std::sin(a), z)));
    }
    return ids;
}

inline bool all_at(const TriMesh& m, const Tri& t, double z)
{
    for (int v : t)
        if (std::abs(m.vertices[v].z() - z) > 1e-9) return false;
    return true;
}

} // namespace detail

// Shell params with the lid levels the stitcher needs.
inline metashell::ShellOptions shell_options_for_lids(const metashell::MetashellParams& p, double lid_thickness)
{
    metashell::ShellOptions o;
    o.extra_levels = {lid_thickness, p.height() - lid_thickness};
    return o;
}

inline MetaOriAssembly integrate(const metashell::MetashellSolid& shell, const kresling::OrigamiSolid& origami,
                                 const IntegrateOptions& opt = {})
{
    const double lt = opt.lid_thickness, Hs = shell.height;
    require(lt > 0 && 2 * lt < Hs, ErrorKind::InvalidParams, "lid thickness must fit inside the shell");
    require(opt.port_diameter >= 0 && opt.port_segments >= 8, ErrorKind::InvalidParams, "bad port settings");
    require(!origami.wall.triangles.empty(), ErrorKind::AlignmentError, "origami solid is empty");

    // the origami rings must be horizontal and centred on the shell axis
    for (const auto* ring : {&origami.bottom_outer, &origami.top_outer, &origami.bottom_inner, &origami.top_inner}) {
        require(ring->size() >= 3, ErrorKind::AlignmentError, "origami rim ring is degenerate");
        Vec3 c = Vec3::Zero();
        double zref = origami.wall.vertices[ring->front()].z(), scale = 0;
        for (int v : *ring) {
            const Vec3& p = origami.wall.vertices[v];
            c += p;
            scale = std::max(scale, std::hypot(p.x(), p.y()));
            require(std::abs(p.z() - zref) < 1e-9, ErrorKind::AlignmentError, "origami rim is not horizontal");
        }
        c /= static_cast<double>(ring->size());
        require(scale > 0 && std::hypot(c.x(), c.y()) <= 1e-9 * std::max(1.0, scale), ErrorKind::AlignmentError,
                "origami axis does not coincide with the shell axis");
    }
    const double span = origami.top_z - origami.bottom_z;
    if (std::abs(span - (Hs - 2 * lt)) > 1e-6)
        fail(ErrorKind::FitError, "origami height must equal the shell interior height between the lids");
    if (origami.outer_radius() + opt.clearance > shell.inner_radius)
        fail(ErrorKind::FitError, "origami does not fit inside the shell with the required clearance");
    const double rp = 0.5 * opt.port_diameter;
    if (rp > 0) {
        double apothem = INFINITY;
        const auto& ring = origami.bottom_inner;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            Vec3 a = origami.wall.vertices[ring[i]], b = origami.wall.vertices[ring[(i + 1) % ring.size()]];
            Vec3 e = (b - a).normalized();
            Vec3 q = a - e * a.dot(e);
            apothem = std::min(apothem, std::hypot(q.x(), q.y()));
        }
        if (rp >= apothem) fail(ErrorKind::FitError, "port is wider than the origami cavity floor");
    }

    MetaOriAssembly out;
    out.shell = shell;
    out.origami = origami;
    out.lid_thickness = lt;
    out.port_diameter = opt.port_diameter;
    out.inflatable = rp > 0;
    const Vec3 shift(0, 0, lt - origami.bottom_z);
    for (TriMesh* m : {&out.origami.outer_mesh, &out.origami.cavity_mesh, &out.origami.wall}) m->translate(shift);
    out.origami.bottom_z += shift.z();
    out.origami.top_z += shift.z();

    TriMesh& m = out.mesh;
    const TriMesh& sm = shell.mesh;
    const double ri = shell.inner_radius;
    auto ring0 = shell.ring_ids(0.0, true), ring1 = shell.ring_ids(lt, true);
    auto ring2 = shell.ring_ids(Hs - lt, true), ring3 = shell.ring_ids(Hs, true);

    m.vertices = sm.vertices;
    for (const Tri& t : sm.triangles) {
        bool on_inner = true, low = true, high = true;
        for (int v : t) {
            const Vec3& p = sm.vertices[v];
            on_inner = on_inner && std::abs(std::hypot(p.x(), p.y()) - ri) < 1e-9;
            low = low && p.z() <= lt + 1e-9;
            high = high && p.z() >= Hs - lt - 1e-9;
        }
        if (on_inner && (low || high)) continue;
        m.triangles.push_back(t);
    }

    const TriMesh& w = out.origami.wall;
    const int base = static_cast<int>(m.vertices.size());
    m.vertices.insert(m.vertices.end(), w.vertices.begin(), w.vertices.end());
    for (const Tri& t : w.triangles) {
        if (detail::all_at(w, t, out.origami.bottom_z) || detail::all_at(w, t, out.origami.top_z)) continue;
        m.add_triangle(t[0] + base, t[1] + base, t[2] + base);
    }
    auto shifted = [&](const std::vector<int>& r) {
        std::vector<int> v;
        for (int id : r) v.push_back(id + base);
        return v;
    };
    auto ob = shifted(origami.bottom_outer), ib = shifted(origami.bottom_inner);
    auto ot = shifted(origami.top_outer), it = shifted(origami.top_inner);

    // bottom lid
    detail::stitch_annulus(m, ob, ring1, true);
    if (rp > 0) {
        auto p0 = detail::circle(m, rp, 0.0, opt.port_segments);
        auto p1 = detail::circle(m, rp, lt, opt.port_segments);
        detail::stitch_annulus(m, p0, ring0, false);
        detail::stitch_annulus(m, p1, ib, true);
        const int n = opt.port_segments;
        for (int k = 0; k < n; ++k) m.add_quad(p0[k], p1[k], p1[(k + 1) % n], p0[(k + 1) % n]);
    } else {
        detail::fan(m, ring0, 0.0, false);
        detail::fan(m, ib, lt, true);
    }
    // top lid
    detail::stitch_annulus(m, ot, ring2, false);
    detail::fan(m, it, Hs - lt, false);
    detail::fan(m, ring3, Hs, true);

    const double a_in = detail::polygon_area(sm, ring0);
    const double a_port = rp > 0 ? 0.5 * opt.port_segments * rp * rp * std::sin(2 * units::pi / opt.port_segments) : 0.0;
    out.bottom_lid_volume = lt * (a_in - a_port);
    out.top_lid_volume = lt * a_in;
    return out;
}

} // namespace metaori::integrate
