#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace metaori {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Tri = std::array<int, 3>;

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<Tri> triangles;

    bool empty() const { return triangles.empty(); }

    int add_vertex(const Vec3& p)
    {
        vertices.push_back(p);
        return static_cast<int>(vertices.size()) - 1;
    }
    void add_triangle(int a, int b, int c) { triangles.push_back({a, b, c}); }
    void add_quad(int a, int b, int c, int d)
    {
        add_triangle(a, b, c);
        add_triangle(a, c, d);
    }

    Vec3 face_normal(std::size_t f) const
    {
        const Tri& t = triangles[f];
        Vec3 n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
        double len = n.norm();
        return len > 0 ? Vec3(n / len) : Vec3::Zero();
    }

    double face_area(std::size_t f) const
    {
        const Tri& t = triangles[f];
        return 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
    }

    std::vector<Vec3> normals() const
    {
        std::vector<Vec3> out(triangles.size());
        for (std::size_t f = 0; f < triangles.size(); ++f) out[f] = face_normal(f);
        return out;
    }

    void append(const TriMesh& o)
    {
        int off = static_cast<int>(vertices.size());
        vertices.insert(vertices.end(), o.vertices.begin(), o.vertices.end());
        for (const Tri& t : o.triangles) triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
    }

    void flip()
    {
        for (Tri& t : triangles) std::swap(t[1], t[2]);
    }

    TriMesh flipped() const
    {
        TriMesh m = *this;
        m.flip();
        return m;
    }

    void translate(const Vec3& d)
    {
        for (Vec3& v : vertices) v += d;
    }
};

// Divergence-theorem volume, positive for outward winding.
inline double signed_volume(const TriMesh& m)
{
    double v = 0.0;
    for (const Tri& t : m.triangles)
        v += m.vertices[t[0]].dot(m.vertices[t[1]].cross(m.vertices[t[2]]));
    return v / 6.0;
}

inline double surface_area(const TriMesh& m)
{
    double a = 0.0;
    for (std::size_t f = 0; f < m.triangles.size(); ++f) a += m.face_area(f);
    return a;
}

inline void bounding_box(const TriMesh& m, Vec3& lo, Vec3& hi)
{
    lo = Vec3::Constant(INFINITY);
    hi = Vec3::Constant(-INFINITY);
    for (const Vec3& v : m.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
}

// Merge vertices closer than tol, keeping the first occurrence. Triangles that
// collapse are dropped. Unreferenced vertices are removed.
inline TriMesh weld(const TriMesh& m, double tol = 1e-6)
{
    struct KeyHash {
        std::size_t operator()(const std::array<std::int64_t, 3>& k) const
        {
            std::size_t h = 1469598103934665603ull;
            for (auto x : k) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
            return h;
        }
    };
    std::unordered_map<std::array<std::int64_t, 3>, std::vector<int>, KeyHash> grid;
    std::vector<int> remap(m.vertices.size(), -1);
    TriMesh out;
    auto key = [&](const Vec3& p) {
        return std::array<std::int64_t, 3>{static_cast<std::int64_t>(std::floor(p.x() / tol)),
                                           static_cast<std::int64_t>(std::floor(p.y() / tol)),
                                           static_cast<std::int64_t>(std::floor(p.z() / tol))};
    };
    std::vector<char> used(m.vertices.size(), 0);
    for (const Tri& t : m.triangles)
        for (int i : t) used[i] = 1;
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        if (!used[i]) continue;
        const Vec3& p = m.vertices[i];
        auto k = key(p);
        int found = -1;
        for (int dx = -1; dx <= 1 && found < 0; ++dx)
            for (int dy = -1; dy <= 1 && found < 0; ++dy)
                for (int dz = -1; dz <= 1 && found < 0; ++dz) {
                    auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
                    if (it == grid.end()) continue;
                    for (int j : it->second)
                        if ((out.vertices[j] - p).norm() <= tol) { found = j; break; }
                }
        if (found < 0) {
            found = out.add_vertex(p);
            grid[k].push_back(found);
        }
        remap[i] = found;
    }
    for (const Tri& t : m.triangles) {
        Tri r{remap[t[0]], remap[t[1]], remap[t[2]]};
        if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) continue;
        out.triangles.push_back(r);
    }
    return out;
}

} // namespace metaori
