#pragma once

#include <cmath>

#include "trimesh.hpp"

namespace metaori {

inline TriMesh unit_cube()
{
    TriMesh m;
    for (int i = 0; i < 8; ++i) m.add_vertex(Vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1));
    m.add_quad(0, 2, 3, 1); // z = 0
    m.add_quad(4, 5, 7, 6); // z = 1
    m.add_quad(0, 1, 5, 4); // y = 0
    m.add_quad(2, 6, 7, 3); // y = 1
    m.add_quad(0, 4, 6, 2); // x = 0
    m.add_quad(1, 3, 7, 5); // x = 1
    return m;
}

// Regular n-gon prism of edge length b and height h, base at z = 0.
inline TriMesh regular_prism(int n, double b, double h)
{
    TriMesh m;
    double R = b / (2.0 * std::sin(M_PI / n));
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < n; ++i) {
            double a = 2.0 * M_PI * i / n;
            m.add_vertex(Vec3(R * std::cos(a), R * std::sin(a), k * h));
        }
    int cb = m.add_vertex(Vec3(0, 0, 0));
    int ct = m.add_vertex(Vec3(0, 0, h));
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        m.add_triangle(cb, j, i);
        m.add_triangle(ct, n + i, n + j);
        m.add_quad(i, j, n + j, n + i);
    }
    return m;
}

} // namespace metaori
