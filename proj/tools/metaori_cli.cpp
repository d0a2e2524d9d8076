#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "metaori/config/server.hpp"
#include "metaori/mesh/io.hpp"

using namespace metaori;
namespace fs = std::filesystem;

namespace {

struct Source {
    std::string file;
    std::string preset;

    config::DesignConfig load() const
    {
        if (!preset.empty()) return config::preset(preset);
        if (file.empty()) fail(ErrorKind::InvalidParams, "give a config file or --preset");
        return config::parse_config(read_file(file));
    }
};

void add_source(CLI::App* cmd, Source& s)
{
    cmd->add_option("config", s.file, "JSON config document");
    cmd->add_option("--preset", s.preset, "named preset instead of a file");
}

void out_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create '" + dir + "'");
}

std::vector<double> parse_values(const std::string& text)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            fail(ErrorKind::SchemaError, "sweep value '" + item + "' is not a number");
        }
    }
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Meta-Ori generator and analysis driver"};
    app.require_subcommand(1);

    Source src;
    std::string output, format = "stl", state = "closed", path, values;
    double extension = -1;
    int port = 8765;
    bool with_config = false;

    auto* gen = app.add_subcommand("generate", "write the Meta-Ori solid as STL or OBJ");
    add_source(gen, src);
    gen->add_option("-o,--output", output, "mesh file")->required();
    gen->add_option("--format", format, "stl or obj")->check(CLI::IsMember({"stl", "obj"}));
    gen->add_option("--state", state, "closed or open")->check(CLI::IsMember({"closed", "open"}));
    gen->add_option("--extension", extension, "per-row apex lift in mm, overrides --state");
    gen->add_flag("--write-config", with_config, "also write the expanded config next to the mesh");

    auto* curves = app.add_subcommand("curves", "force and pressure curves as CSV");
    add_source(curves, src);
    curves->add_option("-o,--output", output, "output directory")->required();

    auto* seq = app.add_subcommand("sequence", "pressure-driven snap sequence of the segments");
    add_source(seq, src);
    seq->add_option("-o,--output", output, "output directory")->required();

    auto* sweep = app.add_subcommand("sweep", "evaluate a config over values of one numeric field");
    add_source(sweep, src);
    sweep->add_option("--path", path, "JSON pointer, e.g. /metashell/h")->required();
    sweep->add_option("--values", values, "comma separated values");
    sweep->add_option("-o,--output", output, "CSV file, stdout when omitted");

    auto* val = app.add_subcommand("validate", "check a config document or a mesh file");
    val->add_option("file", src.file, "config (.json) or mesh (.stl, .obj)")->required();

    auto* srv = app.add_subcommand("serve", "local HTTP service for the design UI");
    srv->add_option("--port", port, "port on 127.0.0.1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            auto c = src.load();
            double e = extension >= 0 ? extension : config::detail::extension_of(config::json{{"state", state}}, c);
            auto a = config::build_meta_ori(c, e);
            MeshReport r = validate_mesh(a.mesh);
            write_file(output, export_mesh(a.mesh, format_from_name(format)));
            if (with_config) write_file(fs::path(output).replace_extension(".json").string(), config::serialize(c));
            std::cout << "wrote " << output << " (" << a.mesh.triangles.size() << " triangles, height "
                      << mechanics::format_sig(a.shell.height, 6) << " mm, valid " << (r.valid() ? "yes" : "no") << ")\n";
            return r.valid() ? 0 : 1;
        }
        if (*curves) {
            auto s = config::evaluate_curves(src.load());
            out_dir(output);
            write_file(output + "/fd_meta.csv", mechanics::to_csv(s.meta));
            write_file(output + "/fd_ori.csv", mechanics::to_csv(s.ori));
            write_file(output + "/fd_combined.csv", mechanics::to_csv(s.combined));
            write_file(output + "/pv.csv", mechanics::to_csv(s.pv));
            write_file(output + "/events.csv", mechanics::events_to_csv(s.pv.events));
            std::cout << "bistable " << (s.bistable ? "yes" : "no") << "\n"
                      << "snap_pressure_mbar " << mechanics::format_sig(s.snap_pressure, 6) << "\n"
                      << "elongation_pct " << mechanics::format_sig(s.elongation, 6) << "\n";
            return 0;
        }
        if (*seq) {
            auto r = config::sequence_from_config(src.load());
            out_dir(output);
            write_file(output + "/trajectory.csv", config::sequence_to_csv(r));
            write_file(output + "/snaps.csv", config::snap_events_to_csv(r));
            std::cout << config::snap_events_to_csv(r);
            return 0;
        }
        if (*sweep) {
            auto t = config::run_sweep(src.load(), path, parse_values(values));
            if (output.empty())
                std::cout << t.to_csv();
            else
                write_file(output, t.to_csv());
            return 0;
        }
        if (*val) {
            std::string ext = fs::path(src.file).extension().string();
            if (ext == ".stl" || ext == ".obj") {
                auto bytes = read_file(src.file);
                MeshReport r = validate_mesh(read_mesh(bytes, ext == ".stl" ? MeshFormat::StlBinary : MeshFormat::ObjAscii));
                std::cout << r.summary();
                return r.valid() ? 0 : 1;
            }
            config::parse_config(read_file(src.file));
            std::cout << "config valid\n";
            return 0;
        }
        if (*srv) {
            std::cout << "serving on http://127.0.0.1:" << port << std::endl;
            config::serve(port);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return config::error_class(e.kind());
    }
    return 0;
}
