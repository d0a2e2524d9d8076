#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "metaori/mesh/validate.hpp"
#include "metaori/metashell/shell.hpp"

using namespace metaori;
using namespace metaori::metashell;

namespace {

MetashellParams paper()
{
    MetashellParams p;
    p.pitch_compression = units::pi * 41.25 / 140.0;
    return p;
}

template <typename F>
ErrorKind kind_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::IoError;
}

// Largest distance from a transformed vertex to its nearest original vertex.
template <typename T>
double set_residual(const std::vector<Vec3>& v, T&& map)
{
    std::vector<Vec3> s = v;
    auto key = [](const Vec3& a, const Vec3& b) {
        if (a.z() != b.z()) return a.z() < b.z();
        if (a.x() != b.x()) return a.x() < b.x();
        return a.y() < b.y();
    };
    std::sort(s.begin(), s.end(), key);
    double worst = 0;
    for (const Vec3& p : v) {
        Vec3 q = map(p);
        auto it = std::lower_bound(s.begin(), s.end(), Vec3(-1e300, -1e300, q.z() - 1e-6), key);
        double best = INFINITY;
        for (; it != s.end() && it->z() <= q.z() + 1e-6; ++it) best = std::min(best, (*it - q).norm());
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

TEST(BeamProfile, CosineRise)
{
    EXPECT_NEAR(beam_profile(0.0, 9.40, 22.50), 0.0, 1e-12);
    EXPECT_NEAR(beam_profile(-11.25, 9.40, 22.50), 9.40, 1e-12);
    EXPECT_NEAR(beam_profile(-5.625, 9.40, 22.50), 4.70, 1e-12);
    EXPECT_EQ(kind_of([] { beam_profile(0.1, 9.40, 22.50); }), ErrorKind::OutOfDomain);
    EXPECT_EQ(kind_of([] { beam_profile(-11.26, 9.40, 22.50); }), ErrorKind::OutOfDomain);
}

TEST(Outline, PitchAndRowHeight)
{
    CellOutline o = build_unit_cell_outline(paper());
    EXPECT_NEAR(o.pitch, 35.0, 1e-12);
    EXPECT_NEAR(o.row_height, 17.5, 1e-12);
    EXPECT_FALSE(o.zero_clearance);
    EXPECT_NEAR(paper().Q(), 7.52, 1e-12);
}

TEST(Outline, MirrorSymmetricAboutMidSpan)
{
    CellOutline o = build_unit_cell_outline(paper());
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> S(0, o.pitch), Z(0, o.row_height);
    for (int i = 0; i < 5000; ++i) {
        double s = S(rng), z = Z(rng);
        EXPECT_EQ(o.contains(s, z), o.contains(o.pitch - s, z));
    }
}

TEST(Outline, Conflicts)
{
    MetashellParams p = paper();
    p.t = p.h;
    EXPECT_EQ(kind_of([&] { build_unit_cell_outline(p); }), ErrorKind::GeometryConflict);
    p = paper();
    p.delta = build_unit_cell_outline(p).clearance;
    EXPECT_EQ(kind_of([&] { build_unit_cell_outline(p); }), ErrorKind::GeometryConflict);
    p = paper();
    p.r = 11.0;
    EXPECT_EQ(kind_of([&] { build_unit_cell_outline(p); }), ErrorKind::GeometryConflict);
    p = paper();
    p.cols = 1;
    EXPECT_EQ(kind_of([&] { build_unit_cell_outline(p); }), ErrorKind::InvalidParams);
    p = paper();
    p.infill_per_row = {0.5, 0.5};
    EXPECT_EQ(kind_of([&] { build_unit_cell_outline(p); }), ErrorKind::InvalidParams);
}

TEST(Outline, ZeroClearanceIsFlagged)
{
    MetashellParams p = paper();
    p.delta = 0.0;
    CellOutline o = build_unit_cell_outline(p);
    EXPECT_TRUE(o.zero_clearance);
    MetashellSolid s = assemble_metashell(p);
    EXPECT_TRUE(s.zero_clearance);
    MeshReport r = validate_mesh(s.mesh);
    EXPECT_TRUE(r.valid()) << r.summary();
    // the column slot closes, so the windows above the beams split per cell
    EXPECT_EQ(r.euler_characteristic, -2 * 5 * p.cols * p.rows);
}

TEST(Shell, PaperPresetDimensions)
{
    MetashellSolid s = assemble_metashell(paper());
    EXPECT_NEAR(s.height, 42.50, 1e-9);
    EXPECT_NEAR(s.closed_height, 42.50, 1e-9);
    EXPECT_GT(s.open_height, s.closed_height);
    EXPECT_NEAR(2 * s.outer_radius, 46.25, 0.03 * 46.25);
    EXPECT_NEAR(2 * s.inner_radius, 36.25, 0.03 * 36.25);
    Vec3 lo, hi;
    bounding_box(s.mesh, lo, hi);
    EXPECT_NEAR(hi.z() - lo.z(), 42.50, 1e-9);
    for (const Vec3& v : s.mesh.vertices) EXPECT_LE(std::hypot(v.x(), v.y()), s.outer_radius + 1e-9);
}

TEST(Shell, PaperPresetIsValidWithExpectedGenus)
{
    MetashellParams p = paper();
    MetashellSolid s = assemble_metashell(p);
    MeshReport r = validate_mesh(s.mesh);
    EXPECT_TRUE(r.valid()) << r.summary();
    EXPECT_EQ(r.self_intersections, 0u);
    EXPECT_EQ(r.components, 1u);
    // four windows per cell and row: below the beams, two between them, one above joined over the column
    EXPECT_EQ(r.euler_characteristic, -2 * 4 * p.cols * p.rows);
}

TEST(Shell, VolumeMatchesUnrolledArea)
{
    for (double kappa : {1.0, paper().pitch_compression}) {
        MetashellParams p = paper();
        p.pitch_compression = kappa;
        MetashellSolid s = assemble_metashell(p);
        double A = p.cols * (2 * p.wall_height * p.pitch() + p.rows * outline_area(s.outline));
        EXPECT_NEAR(signed_volume(s.mesh), A * p.depth * kappa, 1e-3 * A * p.depth * kappa);
    }
}

TEST(Shell, TwoRowsStackAxially)
{
    MetashellParams p = paper();
    p.rows = 2;
    p.infill_per_row = {0.6, 0.99};
    MetashellSolid s = assemble_metashell(p);
    EXPECT_NEAR(s.height - 2 * p.wall_height, 2 * 17.5, 1e-9);
    MeshReport r = validate_mesh(s.mesh);
    EXPECT_TRUE(r.valid()) << r.summary();
    EXPECT_EQ(r.euler_characteristic, -2 * 4 * p.cols * p.rows);
}

TEST(Shell, IsometricWrap)
{
    MetashellParams p;
    EXPECT_NEAR(cell_arc_length(p), p.pitch(), 1e-6);
    MetashellSolid s = assemble_metashell(p);
    double mid = 0.5 * (s.inner_radius + s.outer_radius);
    EXPECT_NEAR(mid * 2 * units::pi / p.cols, 35.0, 1e-6);
}

TEST(Shell, CyclicAndMirrorSymmetry)
{
    MetashellParams p = paper();
    MetashellSolid s = assemble_metashell(p);
    const double step = 2 * units::pi / p.cols;
    Eigen::AngleAxisd rot(step, Vec3::UnitZ());
    EXPECT_LE(set_residual(s.mesh.vertices, [&](const Vec3& v) { return Vec3(rot * v); }), 1e-6);
    // reflection through the vertical plane at the first mid-span
    Vec3 n(-std::sin(step / 2), std::cos(step / 2), 0);
    EXPECT_LE(set_residual(s.mesh.vertices, [&](const Vec3& v) { return Vec3(v - 2 * n.dot(v) * n); }), 1e-6);
}

TEST(Shell, DepthBeyondRadiusFailsToWrap)
{
    MetashellParams p = paper();
    p.depth = 30.0;
    EXPECT_EQ(kind_of([&] { assemble_metashell(p); }), ErrorKind::WrapFailure);
}

TEST(Shell, DeterministicAndExtraLevels)
{
    ShellOptions opt;
    opt.extra_levels = {2.0, 40.5};
    MetashellSolid a = assemble_metashell(paper(), opt);
    MetashellSolid b = assemble_metashell(paper(), opt);
    ASSERT_EQ(a.mesh.vertices.size(), b.mesh.vertices.size());
    ASSERT_EQ(a.mesh.triangles, b.mesh.triangles);
    for (std::size_t i = 0; i < a.mesh.vertices.size(); ++i) EXPECT_EQ(a.mesh.vertices[i], b.mesh.vertices[i]);
    auto ring = a.ring_ids(2.0, true);
    EXPECT_EQ(ring.size(), a.lines.size());
    for (int id : ring) EXPECT_NEAR(a.mesh.vertices[id].head<2>().norm(), a.inner_radius, 1e-9);
    EXPECT_TRUE(validate_mesh(a.mesh).valid());
}

TEST(Shell, DisplacedStateStaysValid)
{
    MetashellParams p = paper();
    for (double e : {5.0, 2 * p.h}) {
        ShellOptions opt;
        opt.extension = e;
        MetashellSolid s = assemble_metashell(p, opt);
        EXPECT_NEAR(s.height, 42.5 + e, 1e-9);
        EXPECT_TRUE(validate_mesh(s.mesh).valid());
    }
}
