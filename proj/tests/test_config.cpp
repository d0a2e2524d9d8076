#include <gtest/gtest.h>

#include <thread>

#include "metaori/config/server.hpp"

using namespace metaori;
using namespace metaori::config;

namespace {

template <typename F>
Error error_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    return Error(ErrorKind::InvalidParams, "no error");
}

} // namespace

TEST(Config, PresetExpandsToPaperDimensions)
{
    DesignConfig c = parse_config(R"({"preset": "paper"})");
    const auto& p = c.metashell;
    EXPECT_EQ(p.c, 12.50);
    EXPECT_EQ(p.l, 22.50);
    EXPECT_EQ(p.t, 1.25);
    EXPECT_EQ(p.h, 9.40);
    EXPECT_EQ(p.r, 7.60);
    EXPECT_EQ(p.delta, 0.63);
    EXPECT_EQ(p.wall_height, 12.5);
    EXPECT_EQ(p.rows, 1);
    EXPECT_EQ(p.cols, 4);
    EXPECT_NEAR(p.Q(), 7.52, 1e-12);
    EXPECT_EQ(c.kresling.n, 6);
    EXPECT_EQ(c.kresling.b, 16.0);
}

TEST(Config, BisegmentPreset)
{
    DesignConfig c = parse_config(R"({"preset": "paper-bisegment"})");
    EXPECT_EQ(c.metashell.rows, 2);
    ASSERT_EQ(c.metashell.infill_per_row.size(), 2u);
    EXPECT_EQ(c.metashell.infill_per_row[0], 0.99);
    EXPECT_EQ(c.metashell.infill_per_row[1], 0.60);
    auto segs = c.segment_specs();
    ASSERT_EQ(segs.size(), 2u);
    EXPECT_EQ(segs[0].infill, 0.99);
    EXPECT_EQ(segs[1].origami_level.levels * 2, c.kresling.levels);
}

TEST(Config, ThetaOutOfRangeIsInvariantError)
{
    Error e = error_of([] { parse_config(R"({"preset": "paper", "kresling": {"theta_deg": 190}})"); });
    EXPECT_EQ(e.kind(), ErrorKind::InvariantError);
}

TEST(Config, UnknownKeyReportsPointer)
{
    Error e = error_of([] { parse_config(R"({"preset": "paper", "colour": "red"})"); });
    EXPECT_EQ(e.kind(), ErrorKind::SchemaError);
    EXPECT_NE(std::string(e.what()).find("/colour"), std::string::npos);
    Error n = error_of([] { parse_config(R"({"metashell": {"hh": 1}})"); });
    EXPECT_NE(std::string(n.what()).find("/metashell/hh"), std::string::npos);
}

TEST(Config, Units)
{
    DesignConfig c = parse_config(R"({"preset": "paper", "metashell": {"h": "8.5 mm"}})");
    EXPECT_EQ(c.metashell.h, 8.5);
    EXPECT_EQ(error_of([] { parse_config(R"({"metashell": {"h": "8.5 in"}})"); }).kind(), ErrorKind::UnitError);
    EXPECT_EQ(error_of([] { parse_config(R"({"kresling": {"theta_deg": "1 rad"}})"); }).kind(), ErrorKind::UnitError);
}

TEST(Config, SchemaVersionAndPresetChecks)
{
    EXPECT_EQ(error_of([] { parse_config(R"({"schema": 2})"); }).kind(), ErrorKind::SchemaError);
    EXPECT_EQ(error_of([] { parse_config(R"({"preset": "nope"})"); }).kind(), ErrorKind::InvariantError);
    EXPECT_EQ(error_of([] { parse_config("{not json"); }).kind(), ErrorKind::SchemaError);
    EXPECT_EQ(error_of([] { parse_config(R"({"metashell": {"rows": 1.5}})"); }).kind(), ErrorKind::SchemaError);
}

TEST(Config, RoundTripIsFixedPoint)
{
    for (const auto& [name, make] : presets()) {
        std::string once = serialize(make());
        std::string twice = serialize(parse_config(once));
        EXPECT_EQ(once, twice) << name;
    }
    DesignConfig c = paper_preset();
    c.segments = {{0.6, 1}, {0.99, 1}};
    c.metashell.infill_per_row = {0.7};
    std::string once = serialize(c);
    EXPECT_EQ(serialize(parse_config(once)), once);
}

TEST(Config, SegmentLevelsMustMatch)
{
    EXPECT_EQ(error_of([] { parse_config(R"({"segments": [{"infill": 0.5, "levels": 1}]})"); }).kind(),
              ErrorKind::InvariantError);
}

TEST(Config, SchemaListsEveryField)
{
    json s = schema();
    EXPECT_EQ(s["properties"]["metashell"]["properties"]["h"]["x-unit"], "mm");
    EXPECT_EQ(s["properties"]["kresling"]["properties"]["theta_deg"]["maximum"], 180.0);
    EXPECT_FALSE(s["additionalProperties"].get<bool>());
    EXPECT_EQ(s["properties"]["schema"]["const"], 1);
}

TEST(Sweep, ArchHeight)
{
    auto t = run_sweep(paper_preset(), "/metashell/h", {4.7, 9.4, 14.1});
    ASSERT_EQ(t.rows.size(), 3u);
    for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_GE(t.rows[i].bistable, t.rows[i - 1].bistable);
    EXPECT_TRUE(t.rows[1].ok);
    EXPECT_TRUE(t.rows[1].bistable);
    EXPECT_EQ(t.rows[1].geometry, "ok");
    EXPECT_NEAR(t.rows[1].elongation, 40.76, 0.05);
    std::string csv = t.to_csv();
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Sweep, ShallowArchIsMonostable)
{
    auto t = run_sweep(paper_preset(), "/metashell/h", {2.0, 9.4});
    EXPECT_FALSE(t.rows[0].bistable);
    EXPECT_TRUE(t.rows[1].bistable);
}

TEST(Sweep, EmptyAndBadPaths)
{
    auto t = run_sweep(paper_preset(), "/metashell/h", {});
    EXPECT_TRUE(t.rows.empty());
    EXPECT_EQ(t.to_csv(), "value,status,bistable,snap_pressure_mbar,elongation_pct,geometry,error\n");
    EXPECT_EQ(error_of([] { run_sweep(paper_preset(), "/kresling/chirality", {1}); }).kind(), ErrorKind::BadPath);
    EXPECT_EQ(error_of([] { run_sweep(paper_preset(), "/metashell/nope", {1}); }).kind(), ErrorKind::BadPath);
    EXPECT_EQ(error_of([] { run_sweep(paper_preset(), "metashell", {1}); }).kind(), ErrorKind::BadPath);
}

TEST(Sweep, FailuresStayInTheirRow)
{
    auto t = run_sweep(paper_preset(), "/metashell/t", {-1.0, 1.25});
    EXPECT_FALSE(t.rows[0].ok);
    EXPECT_NE(t.rows[0].error.find("InvariantError"), std::string::npos);
    EXPECT_TRUE(t.rows[1].ok);
}

TEST(Service, PresetsAndSchema)
{
    Response p = handle("GET", "/api/presets", "");
    EXPECT_EQ(p.status, 200);
    EXPECT_EQ(p.body["paper"]["metashell"]["l"], 22.5);
    EXPECT_TRUE(p.body.contains("paper-bisegment"));
    EXPECT_EQ(handle("GET", "/api/schema", "").body, schema());
    EXPECT_EQ(handle("GET", "/api/nothing", "").status, 404);
}

TEST(Service, CurvesAreDeterministic)
{
    std::string body = R"({"preset": "paper", "analysis": {"fd_samples": 41}})";
    Response a = handle("POST", "/api/curves", body), b = handle("POST", "/api/curves", body);
    ASSERT_EQ(a.status, 200);
    EXPECT_EQ(a.body.dump(), b.body.dump());
    for (const char* k : {"fd_meta", "fd_ori", "fd_combined", "pv", "events"}) EXPECT_TRUE(a.body.contains(k)) << k;
    EXPECT_TRUE(a.body["bistable"].get<bool>());
    EXPECT_EQ(a.body["fd_meta"]["d_mm"].size(), 41u);
}

TEST(Service, MeshResponse)
{
    Response r = handle("POST", "/api/mesh", R"({"config": {"preset": "paper"}, "state": "open"})");
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_TRUE(r.body["report"]["valid"].get<bool>());
    EXPECT_GT(r.body["height_mm"].get<double>(), 42.5);
    EXPECT_EQ(r.body["triangles"][0].size(), 3u);
}

TEST(Service, ErrorStatus)
{
    Response bad = handle("POST", "/api/curves", R"({"colour": 1})");
    EXPECT_EQ(bad.status, 400);
    EXPECT_EQ(bad.body["error"], "SchemaError");
    EXPECT_EQ(handle("POST", "/api/mesh", "{").status, 400);
    EXPECT_EQ(error_class(ErrorKind::NoEquilibrium), 2);
    EXPECT_EQ(error_class(ErrorKind::IoError), 3);
    EXPECT_EQ(error_class(ErrorKind::GeometryConflict), 1);
}

TEST(Service, SequenceResponse)
{
    std::string body = R"({"preset": "paper-bisegment", "analysis": {"sequence_steps": 120, "sequence_samples": 201}})";
    Response r = handle("POST", "/api/sequence", body);
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_EQ(r.body["segments"].size(), 2u);
    EXPECT_EQ(r.body["V_mL"].size(), r.body["segments"][0]["d_mm"].size());
}

TEST(Service, LoopbackServer)
{
    httplib::Server srv;
    add_routes(srv);
    int port = srv.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread t([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();
    httplib::Client cli("127.0.0.1", port);
    auto p = cli.Get("/api/presets");
    ASSERT_TRUE(p);
    EXPECT_EQ(p->status, 200);
    EXPECT_EQ(json::parse(p->body)["paper"]["metashell"]["h"], 9.4);
    auto bad = cli.Post("/api/curves", R"({"colour": 1})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    srv.stop();
    t.join();
}
