#include <gtest/gtest.h>

#include <cmath>

#include "metaori/mesh/io.hpp"
#include "metaori/mesh/primitives.hpp"
#include "metaori/mesh/validate.hpp"

using namespace metaori;

TEST(Mesh, CubeIsClosedWithUnitVolume)
{
    MeshReport r = validate_mesh(unit_cube());
    EXPECT_TRUE(r.closed_manifold());
    EXPECT_TRUE(r.winding_consistent());
    EXPECT_NEAR(r.signed_volume, 1.0, 1e-15);
    EXPECT_EQ(r.euler_characteristic, 2);
    EXPECT_EQ(r.self_intersections, 0u);
    EXPECT_EQ(r.components, 1u);
    EXPECT_TRUE(r.valid());
}

TEST(Mesh, MissingTriangleLeavesThreeBoundaryEdges)
{
    TriMesh m = unit_cube();
    m.triangles.pop_back();
    MeshReport r = validate_mesh(m);
    EXPECT_EQ(r.boundary_edges, 3u);
    EXPECT_FALSE(r.closed_manifold());
    EXPECT_FALSE(r.valid());
}

TEST(Mesh, HexPrismVolume)
{
    MeshReport r = validate_mesh(regular_prism(6, 20.0, 10.0));
    double expect = 1.5 * std::sqrt(3.0) * 400.0 * 10.0;
    EXPECT_NEAR(r.signed_volume / expect, 1.0, 1e-12);
    EXPECT_NEAR(r.signed_volume, 10392.3048454, 1e-6);
    EXPECT_TRUE(r.valid());
}

TEST(Mesh, FlippedWindingIsDetected)
{
    TriMesh m = unit_cube();
    std::swap(m.triangles[0][1], m.triangles[0][2]);
    MeshReport r = validate_mesh(m);
    EXPECT_TRUE(r.closed_manifold());
    EXPECT_FALSE(r.winding_consistent());
}

TEST(Mesh, DegenerateTriangleCounted)
{
    TriMesh m = unit_cube();
    int a = m.add_vertex(Vec3(5, 5, 5));
    int b = m.add_vertex(Vec3(6, 5, 5));
    int c = m.add_vertex(Vec3(7, 5, 5));
    m.add_triangle(a, b, c);
    EXPECT_EQ(validate_mesh(m).degenerate_triangles, 1u);
}

TEST(Mesh, OverlappingCubesIntersect)
{
    TriMesh a = unit_cube();
    TriMesh b = unit_cube();
    b.translate(Vec3(0.5, 0.5, 0.5));
    a.append(b);
    MeshReport r = validate_mesh(a);
    EXPECT_GT(r.self_intersections, 0u);
    TriMesh c = unit_cube();
    TriMesh d = unit_cube();
    d.translate(Vec3(3, 0, 0));
    c.append(d);
    MeshReport s = validate_mesh(c);
    EXPECT_EQ(s.self_intersections, 0u);
    EXPECT_EQ(s.components, 2u);
    EXPECT_EQ(s.euler_characteristic, 4);
}

TEST(Predicates, ExactOrientationOnNearlyCoplanarPoints)
{
    Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
    EXPECT_EQ(predicates::orient3d(a, b, c, Vec3(0.25, 0.25, 0.0)), 0);
    EXPECT_NE(predicates::orient3d(a, b, c, Vec3(0.25, 0.25, 1e-300)), 0);
    EXPECT_EQ(predicates::orient3d(a, b, c, Vec3(0.1, 0.2, 1e-300)),
              -predicates::orient3d(a, b, c, Vec3(0.1, 0.2, -1e-300)));
}

TEST(Io, CubeStlIs684Bytes)
{
    std::string s = export_mesh(unit_cube(), MeshFormat::StlBinary);
    EXPECT_EQ(s.size(), 684u);
    EXPECT_EQ(detail::get_u32(s, 80), 12u);
}

TEST(Io, EmptyMeshRejected)
{
    try {
        export_mesh(TriMesh{}, MeshFormat::StlBinary);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyMesh);
    }
}

TEST(Io, OpenMeshRejected)
{
    TriMesh m = unit_cube();
    m.triangles.pop_back();
    try {
        export_mesh(m, MeshFormat::ObjAscii);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidMesh);
    }
}

TEST(Io, StlRoundTripIsByteIdentical)
{
    TriMesh m = regular_prism(6, 20.0, 10.0);
    for (Vec3& v : m.vertices) v += Vec3(0.1234567, -3.3, 1.0 / 3.0);
    std::string first = export_mesh(m, MeshFormat::StlBinary);
    TriMesh back = read_mesh(first, MeshFormat::StlBinary);
    EXPECT_EQ(back.triangles.size(), m.triangles.size());
    EXPECT_EQ(back.vertices.size(), m.vertices.size());
    EXPECT_EQ(export_mesh(back, MeshFormat::StlBinary), first);
}

TEST(Io, StlReadCube)
{
    TriMesh back = read_mesh(export_mesh(unit_cube(), MeshFormat::StlBinary), MeshFormat::StlBinary);
    EXPECT_EQ(back.triangles.size(), 12u);
    EXPECT_NEAR(signed_volume(back), 1.0, 1e-12);
}

TEST(Io, TruncatedStl)
{
    std::string s = export_mesh(unit_cube(), MeshFormat::StlBinary);
    s.resize(s.size() - 10);
    try {
        read_mesh(s, MeshFormat::StlBinary);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TruncatedFile);
    }
}

TEST(Io, ObjRoundTrip)
{
    TriMesh m = regular_prism(5, 3.0, 2.0);
    TriMesh back = read_mesh(export_mesh(m, MeshFormat::ObjAscii), MeshFormat::ObjAscii);
    ASSERT_EQ(back.vertices.size(), m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(back.vertices[i], m.vertices[i]);
    EXPECT_EQ(back.triangles, m.triangles);
    EXPECT_NE(export_obj(m).find("f 1 "), std::string::npos);
}

TEST(Io, ObjOutOfRangeIndexNamesLine)
{
    std::string text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nf 1 2 9\n";
    try {
        read_mesh(text, MeshFormat::ObjAscii);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
    }
}

TEST(Mesh, WeldMergesCoincidentVertices)
{
    TriMesh soup;
    TriMesh c = unit_cube();
    for (const Tri& t : c.triangles) {
        int a = soup.add_vertex(c.vertices[t[0]] + Vec3(1e-8, 0, 0));
        int b = soup.add_vertex(c.vertices[t[1]]);
        int d = soup.add_vertex(c.vertices[t[2]]);
        soup.add_triangle(a, b, d);
    }
    TriMesh w = weld(soup);
    EXPECT_EQ(w.vertices.size(), 8u);
    EXPECT_TRUE(validate_mesh(w).closed_manifold());
}
