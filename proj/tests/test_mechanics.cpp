#include <gtest/gtest.h>

#include <cmath>

#include "metaori/kresling/assembly.hpp"
#include "metaori/mechanics/sequence.hpp"

using namespace metaori;
using namespace metaori::mechanics;

namespace {

metashell::MetashellParams paper_shell()
{
    metashell::MetashellParams p;
    p.pitch_compression = units::pi * 41.25 / 140.0;
    return p;
}

kresling::KreslingParams paper_origami() { return kresling::design_for_state(6, 16, 38.5 / 4, units::rad(20), 0.8, 2); }

MaterialParams paper_material()
{
    MaterialParams m;
    m.bar_area_model = BarAreaModel::Bending;
    return m;
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

double max_slope(const FDCurve& c)
{
    double s = 0;
    for (std::size_t i = 1; i < c.size(); ++i) s = std::max(s, std::abs(c.F[i] - c.F[i - 1]) / (c.d[i] - c.d[i - 1]));
    return s;
}

struct PaperCurves {
    FDCurve meta, ori, comb;
    PVCurve pv;
};

const PaperCurves& paper_curves()
{
    static const PaperCurves c = [] {
        PaperCurves r;
        auto sp = paper_shell();
        auto m = paper_material();
        OrigamiModel om(paper_origami(), m);
        FdOptions o;
        o.d_max = 2 * sp.h;
        r.meta = metashell_fd(sp, m, o);
        r.ori = origami_fd(om, r.meta.d, 1e-3 * o.d_max);
        r.comb = combined_fd(r.meta, r.ori);
        r.pv = pv_curve(r.comb, [&](double d) { return om.volume(d); });
        return r;
    }();
    return c;
}

SegmentSpec segment(double infill)
{
    SegmentSpec s;
    s.shell_row = paper_shell();
    s.origami_level = kresling::design_for_state(6, 16, 7.0, units::rad(20), 0.8, 2);
    s.infill = infill;
    return s;
}

} // namespace

TEST(BeamRom, PaperBeamIsBistable)
{
    FDCurve c = metashell_fd(paper_shell(), paper_material());
    auto z = zero_crossings(c);
    ASSERT_EQ(z.size(), 3u);
    EXPECT_EQ(z[0], 0.0);
    EXPECT_GT(z[1], 0.5 * 9.4);
    EXPECT_LT(z[2], 2 * 9.4);
    EXPECT_TRUE(is_continuous(c));
    EXPECT_TRUE(detect_events(c).bistable);
}

TEST(BeamRom, ForceScalesWithModulus)
{
    auto m = paper_material();
    FDCurve a = metashell_fd(paper_shell(), m);
    m.E *= 2;
    FDCurve b = metashell_fd(paper_shell(), m);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b.F[i], 2 * a.F[i], 1e-9 * (1 + std::abs(a.F[i])));
    auto za = zero_crossings(a), zb = zero_crossings(b);
    ASSERT_EQ(za.size(), zb.size());
    for (std::size_t i = 0; i < za.size(); ++i) EXPECT_NEAR(za[i], zb[i], 1e-9);
}

TEST(BeamRom, ThickBeamIsMonotonic)
{
    auto p = paper_shell();
    p.t = p.h;
    FDCurve c = metashell_fd(p, paper_material());
    EXPECT_EQ(zero_crossings(c).size(), 1u);
    EXPECT_TRUE(detect_events(c).events.empty());
    FdOptions o;
    o.require_bistable = true;
    EXPECT_EQ(kind_of([&] { metashell_fd(p, paper_material(), o); }), ErrorKind::ModelDomain);
}

TEST(BeamRom, InfillScalesRowForce)
{
    auto p = paper_shell();
    auto m = paper_material();
    p.infill_per_row = {0.5};
    FDCurve half = metashell_fd(p, m);
    p.infill_per_row = {1.0};
    FDCurve full = metashell_fd(p, m);
    double ratio = m.stiffness_scale(0.5) / m.stiffness_scale(1.0);
    EXPECT_NEAR(ratio, 0.65, 1e-12);
    for (std::size_t i = 1; i < half.size(); ++i) EXPECT_NEAR(half.F[i], ratio * full.F[i], 1e-9);
}

TEST(Oracle, RestStateIsForceFree)
{
    EXPECT_NEAR(elastica_oracle(paper_shell(), paper_material(), 0.0), 0.0, 1e-9);
}

TEST(Oracle, AgreesWithRomOnPaperBeam)
{
    auto sp = paper_shell();
    auto m = paper_material();
    std::vector<double> ds;
    for (int k = 1; k <= 50; ++k) ds.push_back(2 * sp.h * k / 50);
    auto Fo = elastica_oracle(sp, m, ds);
    FdOptions o;
    o.samples = 401;
    FDCurve rom = metashell_fd(sp, m, o);
    double peak = 0, se = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        double fr = rom.at(ds[i]);
        EXPECT_EQ(fr > 0, Fo[i] > 0) << "d = " << ds[i];
        peak = std::max(peak, std::abs(Fo[i]));
        se += (fr - Fo[i]) * (fr - Fo[i]);
    }
    EXPECT_LT(std::sqrt(se / ds.size()), 0.10 * peak);
}

TEST(Oracle, ShallowInvertedStateIsNearlyForceFree)
{
    // slender shallow arch: the mirrored cosine is almost an equilibrium
    auto p = paper_shell();
    p.l = 100;
    p.h = 1.5;
    p.t = p.h / 75;
    std::vector<double> ds;
    for (int k = 1; k <= 40; ++k) ds.push_back(2 * p.h * k / 40);
    auto F = elastica_oracle(p, paper_material(), ds);
    double peak = 0;
    for (double f : F) peak = std::max(peak, std::abs(f));
    EXPECT_LT(std::abs(F.back()), 0.02 * peak);
}

TEST(Oracle, ShallowThickArchIsMonotonic)
{
    auto p = paper_shell();
    p.l = 100;
    p.h = p.t = 1.5;
    std::vector<double> ds;
    for (int k = 1; k <= 20; ++k) ds.push_back(2 * p.h * k / 20);
    auto F = elastica_oracle(p, paper_material(), ds);
    FDCurve rom = metashell_fd(p, paper_material());
    for (std::size_t i = 0; i < F.size(); ++i) {
        EXPECT_GT(F[i], 0);
        if (i > 0) EXPECT_GT(F[i], F[i - 1]);
        EXPECT_NEAR(rom.at(ds[i]), F[i], 0.02 * F[i]);
    }
}

TEST(Origami, RestStateIsForceFree)
{
    OrigamiModel om(paper_origami(), paper_material());
    EXPECT_NEAR(om.force(0.0, 1e-3), 0.0, 1e-9);
    EXPECT_NEAR(om.exact_force(0.0), 0.0, 1e-9);
}

TEST(Origami, SofterThanMetashell)
{
    const auto& c = paper_curves();
    EXPECT_LT(max_slope(c.ori), max_slope(c.meta));
}

TEST(Origami, ForceScalesWithBarStiffness)
{
    auto m = paper_material();
    FdOptions o;
    o.samples = 41;
    FDCurve a = origami_fd(paper_origami(), m, o);
    m.bar_stiffness_factor = 2;
    FDCurve b = origami_fd(paper_origami(), m, o);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b.F[i], 2 * a.F[i], 1e-7 * (1 + std::abs(a.F[i])));
}

TEST(Origami, EnergyConsistency)
{
    auto m = paper_material();
    OrigamiModel om(paper_origami(), m);
    auto ds = grid(0.0, 15.0, 201);
    FDCurve c = origami_fd(om, ds, 1e-3 * 15.0);
    double W = 0;
    for (std::size_t i = 1; i < c.size(); ++i) W += 0.5 * (c.F[i] + c.F[i - 1]) * (c.d[i] - c.d[i - 1]);
    double dU = om.energy(15.0) - om.energy(0.0);
    EXPECT_NEAR(W, dU, 0.01 * std::abs(dU));
}

TEST(Origami, CentralDifferenceIsSecondOrder)
{
    OrigamiModel om(paper_origami(), paper_material());
    for (double d : {3.0, 8.0, 12.0}) {
        double exact = om.exact_force(d);
        double h = 0.4;
        double e1 = std::abs(om.force(d, h) - exact), e2 = std::abs(om.force(d, h / 2) - exact);
        double e3 = std::abs(om.force(d, h / 4) - exact);
        EXPECT_GE(std::log2(e1 / e2), 1.8) << d;
        EXPECT_LE(std::log2(e1 / e2), 2.2) << d;
        EXPECT_GE(std::log2(e2 / e3), 1.8) << d;
        EXPECT_LE(std::log2(e2 / e3), 2.2) << d;
    }
}

TEST(Origami, OutsideBandIsInfeasible)
{
    OrigamiModel om(paper_origami(), paper_material());
    EXPECT_EQ(kind_of([&] { om.energy(om.d_max() + 1); }), ErrorKind::InfeasibleHeight);
}

TEST(Combined, ZeroOrigamiLeavesMetashell)
{
    const auto& c = paper_curves();
    FDCurve zero = c.ori;
    for (double& f : zero.F) f = 0;
    FDCurve s = combined_fd(c.meta, zero);
    ASSERT_EQ(s.size(), c.meta.size());
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.F[i], c.meta.F[i]);
    EXPECT_EQ(s.role, CurveRole::Combined);
}

TEST(Combined, SumIsExactAndStaysNonmonotonic)
{
    const auto& c = paper_curves();
    for (std::size_t i = 0; i < c.comb.size(); ++i)
        EXPECT_EQ(c.comb.F[i], c.meta.at(c.comb.d[i]) + c.ori.at(c.comb.d[i]));
    auto ev = detect_events(c.comb);
    EXPECT_GE(ev.maxima(), 1u);
    EXPECT_GE(ev.minima(), 1u);
}

TEST(Combined, IncreasingCurvesSumIncreasing)
{
    FDCurve a, b;
    for (int i = 0; i <= 20; ++i) {
        a.d.push_back(i * 0.5);
        a.F.push_back(std::sqrt(i * 0.5));
        b.d.push_back(1 + i * 0.37);
        b.F.push_back(0.1 * i * i);
    }
    FDCurve s = combined_fd(a, b);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s.F[i], s.F[i - 1]);
    FDCurve far = b;
    for (double& x : far.d) x += 100;
    EXPECT_EQ(kind_of([&] { combined_fd(a, far); }), ErrorKind::DomainMismatch);
}

TEST(Volume, Analytic)
{
    auto flat = kresling::make_state(6, 10.0, {0.0}, {0.0}, {1});
    EXPECT_NEAR(cavity_volume(flat), 0.0, 1e-9);
    auto prism = kresling::make_state(6, 20.0, {10.0}, {0.0}, {1});
    EXPECT_NEAR(cavity_volume(prism), 1.5 * std::sqrt(3.0) * 400 * 10 * 1e-3, 1e-9);
    TriMesh cube;
    for (int i = 0; i < 8; ++i) cube.add_vertex(Vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1) * 10.0);
    int q[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (auto& f : q) cube.add_quad(f[0], f[1], f[2], f[3]);
    EXPECT_NEAR(mesh_volume_mL(cube), 1.0, 1e-12);
    TriMesh unit = cube;
    for (Vec3& v : unit.vertices) v /= 10.0;
    EXPECT_NEAR(mesh_volume_mL(unit), 0.001, 1e-15);
    cube.triangles.pop_back();
    EXPECT_EQ(kind_of([&] { mesh_volume_mL(cube); }), ErrorKind::OpenCavity);
}

TEST(PressureVolume, ZeroForceZeroPressure)
{
    FDCurve z;
    z.role = CurveRole::Combined;
    z.d = grid(0, 10, 21);
    z.F.assign(21, 0.0);
    PVCurve pv = pv_curve(z, [](double d) { return 2.0 + 0.5 * d; });
    for (double p : pv.P) EXPECT_EQ(p, 0.0);
    EXPECT_TRUE(pv.events.events.empty());
    EXPECT_EQ(kind_of([&] { pv_curve(z, [](double) { return 1.0; }); }), ErrorKind::DegenerateVolumeMap);
}

TEST(PressureVolume, UnitConversion)
{
    // 1 N over 100 mm^2 of area is 0.01 MPa = 100 mbar
    FDCurve c;
    c.d = grid(0, 1, 5);
    c.F.assign(5, 1.0);
    PVCurve pv = pv_curve(c, [](double d) { return 0.1 * d; });
    for (double p : pv.P) EXPECT_NEAR(p, 100.0, 1e-6);
    EXPECT_NEAR(pv.V.back(), 0.1, 1e-12);
}

TEST(PressureVolume, PaperPresetRanges)
{
    const auto& pv = paper_curves().pv;
    double pmax = *std::max_element(pv.P.begin(), pv.P.end());
    double pmin = *std::min_element(pv.P.begin(), pv.P.end());
    EXPECT_GE(pmax, 50.0);
    EXPECT_LE(pmax, 450.0);
    EXPECT_LT(pmin, 0.0);
    EXPECT_GE(pv.events.maxima(), 1u);
    EXPECT_GE(pv.events.minima(), 1u);
    EXPECT_TRUE(pv.events.bistable);
}

TEST(Events, MonotoneCurveHasNone)
{
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
        x.push_back(i);
        y.push_back(std::exp(0.1 * i));
    }
    auto ev = detect_events(x, y);
    EXPECT_TRUE(ev.events.empty());
    EXPECT_FALSE(ev.bistable);
}

TEST(Events, CubicExtrema)
{
    std::vector<double> x, y;
    const int n = 4001;
    for (int i = 0; i < n; ++i) {
        double v = 4.0 * i / (n - 1);
        x.push_back(v);
        y.push_back((v - 1) * (v - 2) * (v - 3));
    }
    auto ev = detect_events(x, y);
    ASSERT_EQ(ev.events.size(), 2u);
    const double step = 4.0 / (n - 1);
    EXPECT_EQ(ev.events[0].type, Event::Maximum);
    EXPECT_NEAR(ev.events[0].x, 2 - 1 / std::sqrt(3.0), step);
    EXPECT_EQ(ev.events[1].type, Event::Minimum);
    EXPECT_NEAR(ev.events[1].x, 2 + 1 / std::sqrt(3.0), step);
}

TEST(Sequence, IdenticalSegmentsMoveTogether)
{
    auto r = simulate_sequence({segment(0.8), segment(0.8)}, paper_material());
    for (const auto& d : r.d) EXPECT_NEAR(d[0], d[1], 1e-9);
    auto a = r.events_for(0, "inflation"), b = r.events_for(1, "inflation");
    ASSERT_EQ(a.size(), 1u);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(a[0].step, b[0].step);
}

TEST(Sequence, LowerInfillSnapsFirst)
{
    auto m = paper_material();
    auto r = simulate_sequence({segment(0.60), segment(0.99)}, m);
    auto lo = r.events_for(0, "inflation"), hi = r.events_for(1, "inflation");
    ASSERT_FALSE(lo.empty());
    ASSERT_FALSE(hi.empty());
    EXPECT_LT(lo[0].P, hi[0].P);
    EXPECT_LT(lo[0].V, hi[0].V);

    auto s = simulate_sequence({segment(0.99), segment(0.60)}, m);
    auto first0 = s.events_for(0, "inflation"), first1 = s.events_for(1, "inflation");
    ASSERT_FALSE(first0.empty());
    ASSERT_FALSE(first1.empty());
    EXPECT_LT(first1[0].V, first0[0].V);
}

TEST(Sequence, Deterministic)
{
    auto a = simulate_sequence({segment(0.6), segment(0.99)}, paper_material());
    auto b = simulate_sequence({segment(0.6), segment(0.99)}, paper_material());
    EXPECT_EQ(a.P, b.P);
    EXPECT_EQ(a.d, b.d);
}

TEST(Elongation, PaperPreset)
{
    auto sp = paper_shell();
    FDCurve c = metashell_fd(sp, paper_material());
    double e = predict_elongation(sp, c);
    EXPECT_NEAR(e, 43.0, 15.0);
    auto tall = sp;
    tall.wall_height *= 2;
    EXPECT_LT(predict_elongation(tall, c), e);
    auto thick = sp;
    thick.t = thick.h;
    EXPECT_EQ(kind_of([&] { predict_elongation(thick, metashell_fd(thick, paper_material())); }), ErrorKind::NotBistable);
}

TEST(Csv, FormatAndRoundTrip)
{
    FDCurve c;
    c.d = {0.0, 1.0 / 3.0, 2.5};
    c.F = {0.0, -12.3456789123, 1e-7};
    std::string s = to_csv(c);
    EXPECT_EQ(s.substr(0, 9), "d_mm,F_N\n");
    EXPECT_NE(s.find("0.333333333,-12.3456789\n"), std::string::npos);
    FDCurve back = fd_from_csv(s);
    ASSERT_EQ(back.size(), 3u);
    EXPECT_NEAR(back.F[1], c.F[1], 1e-7);
    EXPECT_EQ(kind_of([] { fd_from_csv("x,y\n1,2\n"); }), ErrorKind::ParseError);
    PVCurve pv;
    pv.V = {1};
    pv.P = {2};
    EXPECT_EQ(to_csv(pv), "V_mL,P_mbar\n1,2\n");
}
