#include <cstdio>
#include <string>

#include "metaori/config/pipeline.hpp"
#include "metaori/mesh/io.hpp"

using namespace metaori;

int main(int argc, char** argv)
{
    std::string dir = argc > 1 ? argv[1] : ".";
    try {
        auto cfg = config::paper_preset();
        auto closed = config::build_meta_ori(cfg);
        auto curves = config::evaluate_curves(cfg);
        auto open = config::build_meta_ori(cfg, mechanics::stable_displacement(
                                                    mechanics::metashell_fd(cfg.metashell, cfg.material)));

        write_file(dir + "/meta_ori_closed.stl", export_mesh(closed.mesh, MeshFormat::StlBinary));
        write_file(dir + "/meta_ori_open.stl", export_mesh(open.mesh, MeshFormat::StlBinary));
        write_file(dir + "/paper.json", config::serialize(cfg));
        write_file(dir + "/pv.csv", mechanics::to_csv(curves.pv));

        MeshReport r = validate_mesh(closed.mesh);
        std::printf("closed height %.2f mm, open height %.2f mm\n", closed.shell.height, open.shell.height);
        std::printf("mesh %zu triangles, valid %s\n", closed.mesh.triangles.size(), r.valid() ? "yes" : "no");
        std::printf("bistable %s, snap pressure %.1f mbar, elongation %.1f%%\n", curves.bistable ? "yes" : "no",
                    curves.snap_pressure, curves.elongation);

        auto seq = config::sequence_from_config(config::paper_bisegment_preset());
        for (const auto& e : seq.events)
            std::printf("segment %d snaps on %s at %.2f mL, %.1f mbar\n", e.segment, e.branch.c_str(), e.V, e.P);
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    return 0;
}
