#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "predicates.hpp"
#include "trimesh.hpp"

namespace metaori {

struct MeshReport {
    std::size_t vertex_count = 0;
    std::size_t triangle_count = 0;
    std::size_t edge_count = 0;
    std::size_t boundary_edges = 0;      // edges used by one triangle
    std::size_t nonmanifold_edges = 0;   // edges used by three or more
    std::size_t degenerate_triangles = 0;
    std::size_t inconsistent_edges = 0;  // manifold edges traversed twice in the same direction
    std::size_t self_intersections = 0;  // intersecting pairs that share no vertex
    bool self_intersections_checked = false;
    std::vector<std::pair<int, int>> intersecting_pairs;
    std::size_t components = 0;
    double signed_volume = 0.0;
    long euler_characteristic = 0;

    bool closed_manifold() const { return triangle_count > 0 && boundary_edges == 0 && nonmanifold_edges == 0; }
    bool winding_consistent() const { return inconsistent_edges == 0; }

    // Sum of genus over components assuming every component is a closed orientable surface.
    long total_genus() const { return (2 * static_cast<long>(components) - euler_characteristic) / 2; }

    bool watertight() const
    {
        return closed_manifold() && winding_consistent() && degenerate_triangles == 0 && signed_volume > 0;
    }

    bool valid(std::size_t max_intersections = 10) const
    {
        return watertight() && (!self_intersections_checked || self_intersections <= max_intersections);
    }

    std::string summary() const
    {
        std::ostringstream os;
        os << "vertices " << vertex_count << "\n"
           << "triangles " << triangle_count << "\n"
           << "closed_manifold " << (closed_manifold() ? "yes" : "no") << "\n"
           << "boundary_edges " << boundary_edges << "\n"
           << "nonmanifold_edges " << nonmanifold_edges << "\n"
           << "degenerate_triangles " << degenerate_triangles << "\n"
           << "winding_consistent " << (winding_consistent() ? "yes" : "no") << "\n"
           << "self_intersections ";
        if (self_intersections_checked) os << self_intersections; else os << "unchecked";
        os << "\n"
           << "components " << components << "\n"
           << "signed_volume " << signed_volume << "\n"
           << "euler_characteristic " << euler_characteristic << "\n"
           << "valid " << (valid() ? "yes" : "no") << "\n";
        return os.str();
    }
};

struct ValidateOptions {
    bool check_self_intersections = true;
    double degenerate_area = 1e-12;
};

namespace detail {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x)
    {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

inline std::size_t count_self_intersections(const TriMesh& m, std::vector<std::pair<int, int>>* pairs)
{
    const std::size_t nt = m.triangles.size();
    if (nt < 2) return 0;
    std::vector<Vec3> lo(nt), hi(nt);
    Vec3 glo = Vec3::Constant(INFINITY), ghi = Vec3::Constant(-INFINITY);
    double mean = 0.0;
    for (std::size_t f = 0; f < nt; ++f) {
        const Tri& t = m.triangles[f];
        lo[f] = m.vertices[t[0]].cwiseMin(m.vertices[t[1]]).cwiseMin(m.vertices[t[2]]);
        hi[f] = m.vertices[t[0]].cwiseMax(m.vertices[t[1]]).cwiseMax(m.vertices[t[2]]);
        glo = glo.cwiseMin(lo[f]);
        ghi = ghi.cwiseMax(hi[f]);
        mean += (hi[f] - lo[f]).maxCoeff();
    }
    mean /= static_cast<double>(nt);
    double cell = std::max(mean * 2.0, 1e-9);
    Eigen::Vector3i dims;
    for (int k = 0; k < 3; ++k)
        dims[k] = std::clamp(static_cast<int>((ghi[k] - glo[k]) / cell) + 1, 1, 256);
    Vec3 size = (ghi - glo).cwiseQuotient(dims.cast<double>()).cwiseMax(Vec3::Constant(1e-12));
    auto idx = [&](const Vec3& p, int k) {
        return std::clamp(static_cast<int>((p[k] - glo[k]) / size[k]), 0, dims[k] - 1);
    };
    std::vector<std::vector<int>> bins(static_cast<std::size_t>(dims.prod()));
    for (std::size_t f = 0; f < nt; ++f)
        for (int i = idx(lo[f], 0); i <= idx(hi[f], 0); ++i)
            for (int j = idx(lo[f], 1); j <= idx(hi[f], 1); ++j)
                for (int k = idx(lo[f], 2); k <= idx(hi[f], 2); ++k)
                    bins[(static_cast<std::size_t>(k) * dims[1] + j) * dims[0] + i].push_back(static_cast<int>(f));

    std::vector<std::pair<int, int>> found;
    for (const auto& bin : bins) {
        for (std::size_t u = 0; u < bin.size(); ++u) {
            for (std::size_t v = u + 1; v < bin.size(); ++v) {
                int f = bin[u], g = bin[v];
                if (f > g) std::swap(f, g);
                const Tri& a = m.triangles[f];
                const Tri& b = m.triangles[g];
                bool share = false;
                for (int x : a)
                    for (int y : b)
                        if (x == y) share = true;
                if (share) continue;
                if ((lo[f].array() > hi[g].array()).any() || (lo[g].array() > hi[f].array()).any()) continue;
                if (predicates::triangles_intersect(m.vertices[a[0]], m.vertices[a[1]], m.vertices[a[2]],
                                                    m.vertices[b[0]], m.vertices[b[1]], m.vertices[b[2]]))
                    found.emplace_back(f, g);
            }
        }
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    if (pairs) *pairs = found;
    return found.size();
}

} // namespace detail

inline MeshReport validate_mesh(const TriMesh& m, const ValidateOptions& opt = {})
{
    MeshReport r;
    r.triangle_count = m.triangles.size();

    std::vector<char> used(m.vertices.size(), 0);
    for (const Tri& t : m.triangles)
        for (int i : t) used[i] = 1;
    r.vertex_count = static_cast<std::size_t>(std::count(used.begin(), used.end(), 1));

    // (min,max) -> (count, forward count)
    std::map<std::pair<int, int>, std::pair<int, int>> edges;
    detail::UnionFind uf(m.triangles.size());
    std::map<std::pair<int, int>, int> first_face;
    for (std::size_t f = 0; f < m.triangles.size(); ++f) {
        const Tri& t = m.triangles[f];
        if (m.face_area(f) <= opt.degenerate_area) ++r.degenerate_triangles;
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            auto key = std::minmax(a, b);
            auto& e = edges[key];
            e.first += 1;
            if (a < b) e.second += 1;
            auto it = first_face.find(key);
            if (it == first_face.end()) first_face[key] = static_cast<int>(f);
            else uf.unite(static_cast<int>(f), it->second);
        }
    }
    r.edge_count = edges.size();
    for (const auto& [key, e] : edges) {
        if (e.first == 1) ++r.boundary_edges;
        else if (e.first > 2) ++r.nonmanifold_edges;
        else if (e.second != 1) ++r.inconsistent_edges;
    }
    std::vector<char> root(m.triangles.size(), 0);
    for (std::size_t f = 0; f < m.triangles.size(); ++f) root[uf.find(static_cast<int>(f))] = 1;
    r.components = static_cast<std::size_t>(std::count(root.begin(), root.end(), 1));
    r.signed_volume = signed_volume(m);
    r.euler_characteristic = static_cast<long>(r.vertex_count) - static_cast<long>(r.edge_count)
                           + static_cast<long>(r.triangle_count);
    if (opt.check_self_intersections) {
        r.self_intersections = detail::count_self_intersections(m, &r.intersecting_pairs);
        r.self_intersections_checked = true;
    }
    return r;
}

} // namespace metaori
