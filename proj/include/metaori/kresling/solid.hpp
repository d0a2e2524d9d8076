#pragma once

#include <map>
#include <vector>

#include "../mesh/validate.hpp"
#include "assembly.hpp"

namespace metaori::kresling {

// Offset direction per vertex: m . n_f = 1 in the least-squares sense over the
// incident faces. Vertices flagged planar keep m_z = 0 so rims stay in their plane.
inline std::vector<Vec3> miter_directions(const TriMesh& s, const std::vector<char>& planar)
{
    std::vector<std::vector<Vec3>> incident(s.vertices.size());
    for (std::size_t f = 0; f < s.triangles.size(); ++f) {
        Vec3 n = s.face_normal(f);
        for (int v : s.triangles[f]) incident[v].push_back(n);
    }
    std::vector<Vec3> m(s.vertices.size(), Vec3::Zero());
    for (std::size_t v = 0; v < s.vertices.size(); ++v) {
        const auto& N = incident[v];
        if (N.empty()) continue;
        bool flat = !planar.empty() && planar[v];
        int cols = flat ? 2 : 3;
        Eigen::MatrixXd A(N.size(), cols);
        Eigen::VectorXd rhs = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(N.size()));
        for (std::size_t i = 0; i < N.size(); ++i)
            for (int c = 0; c < cols; ++c) A(static_cast<Eigen::Index>(i), c) = N[i][c];
        Eigen::VectorXd x = A.completeOrthogonalDecomposition().solve(rhs);
        for (int c = 0; c < cols; ++c) m[v][c] = x[c];
    }
    return m;
}

struct Thickened {
    TriMesh solid;              // closed offset shell of the surface
    std::vector<int> outer;     // vertex id of the +t/2 copy per surface vertex
    std::vector<int> inner;     // vertex id of the -t/2 copy
};

// Extrude a surface by t/2 to each side and close it along its boundary.
inline Thickened thicken_surface(const TriMesh& surf, double t, const std::vector<char>& planar = {})
{
    require(t > 0, ErrorKind::InvalidParams, "thickness must be > 0");
    std::vector<Vec3> m = miter_directions(surf, planar);
    Thickened out;
    const int nv = static_cast<int>(surf.vertices.size());
    out.outer.resize(nv);
    out.inner.resize(nv);
    for (int v = 0; v < nv; ++v) out.outer[v] = out.solid.add_vertex(surf.vertices[v] + 0.5 * t * m[v]);
    for (int v = 0; v < nv; ++v) out.inner[v] = out.solid.add_vertex(surf.vertices[v] - 0.5 * t * m[v]);
    for (const Tri& f : surf.triangles) {
        out.solid.add_triangle(out.outer[f[0]], out.outer[f[1]], out.outer[f[2]]);
        out.solid.add_triangle(out.inner[f[0]], out.inner[f[2]], out.inner[f[1]]);
    }
    std::map<std::pair<int, int>, int> half;
    for (const Tri& f : surf.triangles)
        for (int k = 0; k < 3; ++k) half[{f[k], f[(k + 1) % 3]}] += 1;
    for (const Tri& f : surf.triangles)
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            if (half.count({b, a})) continue;
            out.solid.add_quad(out.outer[a], out.inner[a], out.inner[b], out.outer[b]);
        }
    return out;
}

// Closed solid from an arbitrary face set; throws SelfIntersection when the offsets cross.
inline TriMesh thicken_faces(const TriMesh& surf, double t)
{
    Thickened th = thicken_surface(surf, t);
    MeshReport r = validate_mesh(th.solid);
    if (r.self_intersections > 0) {
        std::string pairs;
        for (std::size_t i = 0; i < std::min<std::size_t>(r.intersecting_pairs.size(), 8); ++i)
            pairs += " (" + std::to_string(r.intersecting_pairs[i].first) + "," +
                     std::to_string(r.intersecting_pairs[i].second) + ")";
        fail(ErrorKind::SelfIntersection, "offset surfaces cross at faces" + pairs);
    }
    return th.solid;
}

struct OrigamiSolid {
    TriMesh outer_mesh;   // envelope: outer offset surface plus end plates
    TriMesh cavity_mesh;  // inner offset surface closed at the rim planes
    TriMesh wall;         // thick lateral wall, open ends closed by rim strips
    std::vector<int> bottom_outer, bottom_inner, top_outer, top_inner;  // rim rings, ids into wall
    double bottom_z = 0.0, top_z = 0.0;
    double t_face = 0.0;

    // Printable standalone solid: envelope with the cavity as an inner shell.
    TriMesh material() const
    {
        TriMesh m = outer_mesh;
        m.append(cavity_mesh.flipped());
        return m;
    }

    double outer_radius() const
    {
        double r = 0;
        for (const Vec3& v : wall.vertices) r = std::max(r, std::hypot(v.x(), v.y()));
        return r;
    }
};

namespace detail {

inline void fan_cap(TriMesh& m, const std::vector<int>& ring, double z, bool up)
{
    int c = m.add_vertex(Vec3(0, 0, z));
    const int n = static_cast<int>(ring.size());
    for (int i = 0; i < n; ++i) {
        int a = ring[i], b = ring[(i + 1) % n];
        if (up) m.add_triangle(c, a, b);
        else m.add_triangle(c, b, a);
    }
}

} // namespace detail

inline OrigamiSolid thicken_origami(const KreslingState& st, double t_face)
{
    TriMesh surf = lateral_surface(st);
    const int n = st.n;
    const int top = st.layers();
    std::vector<char> planar(surf.vertices.size(), 0);
    for (int i = 0; i < n; ++i) {
        planar[ring_vertex(n, 0, i)] = 1;
        planar[ring_vertex(n, top, i)] = 1;
    }
    Thickened th = thicken_surface(surf, t_face, planar);
    OrigamiSolid s;
    s.t_face = t_face;
    s.wall = th.solid;
    s.bottom_z = 0.0;
    s.top_z = st.total_height();
    // ring order follows increasing angle for right-handed stacks
    auto ring_ids = [&](int k, const std::vector<int>& map) {
        std::vector<int> r(n);
        for (int i = 0; i < n; ++i) r[i] = map[ring_vertex(n, k, i)];
        if (st.chirality == Chirality::Left) std::reverse(r.begin(), r.end());
        return r;
    };
    s.bottom_outer = ring_ids(0, th.outer);
    s.bottom_inner = ring_ids(0, th.inner);
    s.top_outer = ring_ids(top, th.outer);
    s.top_inner = ring_ids(top, th.inner);

    // envelope
    TriMesh& o = s.outer_mesh;
    std::vector<int> ob, ot, obl, otl;
    for (int v : s.bottom_outer) ob.push_back(o.add_vertex(th.solid.vertices[v]));
    for (int v : s.top_outer) ot.push_back(o.add_vertex(th.solid.vertices[v]));
    std::map<int, int> omap;
    for (int i = 0; i < n; ++i) {
        omap[s.bottom_outer[i]] = ob[i];
        omap[s.top_outer[i]] = ot[i];
    }
    for (const Tri& f : surf.triangles) {
        Tri g;
        for (int k = 0; k < 3; ++k) {
            int id = th.outer[f[k]];
            auto it = omap.find(id);
            g[k] = it != omap.end() ? it->second : (omap[id] = o.add_vertex(th.solid.vertices[id]));
        }
        o.triangles.push_back(g);
    }
    for (int i = 0; i < n; ++i) {
        obl.push_back(o.add_vertex(o.vertices[ob[i]] - Vec3(0, 0, t_face)));
        otl.push_back(o.add_vertex(o.vertices[ot[i]] + Vec3(0, 0, t_face)));
    }
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        o.add_quad(ob[i], obl[i], obl[j], ob[j]);
        o.add_quad(ot[i], ot[j], otl[j], otl[i]);
    }
    detail::fan_cap(o, obl, s.bottom_z - t_face, false);
    detail::fan_cap(o, otl, s.top_z + t_face, true);

    // cavity
    TriMesh& c = s.cavity_mesh;
    std::map<int, int> cmap;
    for (const Tri& f : surf.triangles) {
        Tri g;
        for (int k = 0; k < 3; ++k) {
            int id = th.inner[f[k]];
            auto it = cmap.find(id);
            g[k] = it != cmap.end() ? it->second : (cmap[id] = c.add_vertex(th.solid.vertices[id]));
        }
        c.triangles.push_back(g);
    }
    std::vector<int> cb, ct;
    for (int v : s.bottom_inner) cb.push_back(cmap.at(v));
    for (int v : s.top_inner) ct.push_back(cmap.at(v));
    detail::fan_cap(c, cb, s.bottom_z, false);
    detail::fan_cap(c, ct, s.top_z, true);
    return s;
}

} // namespace metaori::kresling
