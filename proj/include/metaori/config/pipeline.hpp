#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../integrate/assembly.hpp"
#include "../kresling/solid.hpp"
#include "../mechanics/sequence.hpp"
#include "../mesh/validate.hpp"
#include "../metashell/shell.hpp"
#include "config.hpp"

namespace metaori::config {

// Meta-Ori at a per-row apex lift; the origami follows with H = H0 + rows*e/layers.
inline integrate::MetaOriAssembly build_meta_ori(const DesignConfig& c, double extension = 0.0)
{
    const auto& p = c.metashell;
    const double lt = c.integration.lid_thickness;
    metashell::ShellOptions so;
    so.extension = extension;
    double Hs = 2.0 * p.wall_height + p.rows * (p.row_height() + extension);
    so.extra_levels = {lt, Hs - lt};
    auto shell = metashell::assemble_metashell(p, so);
    auto kp = c.kresling.params();
    mechanics::OrigamiModel om(kp, c.material);
    auto origami = kresling::thicken_origami(om.state(p.rows * extension), kp.t_face);
    return integrate::integrate(shell, origami, c.integration);
}

struct CurveSet {
    mechanics::FDCurve meta, ori, combined;
    mechanics::PVCurve pv;
    bool bistable = false;
    double snap_pressure = NAN;  // mbar, first pressure maximum
    double elongation = NAN;     // %
};

// Curves of a single row, or of the first segment when the shell has several rows.
inline CurveSet evaluate_curves(const DesignConfig& c)
{
    mechanics::SegmentSpec s = c.segment_specs().front();
    if (c.metashell.rows == 1) s.origami_level = c.kresling.params();
    mechanics::OrigamiModel om(s.origami_level, c.material);
    mechanics::FdOptions o;
    o.samples = c.analysis.fd_samples;
    o.d_max = std::min(2.0 * s.shell_row.h, 0.995 * om.d_max());
    CurveSet r;
    r.meta = mechanics::metashell_fd(s.shell_row, c.material, o);
    r.ori = mechanics::origami_fd(om, r.meta.d, 1e-3 * o.d_max);
    r.combined = mechanics::combined_fd(r.meta, r.ori);
    r.pv = mechanics::pv_curve(r.combined, [&](double d) { return om.volume(d); });
    r.bistable = mechanics::detect_events(r.meta).bistable;
    for (const auto& e : r.pv.events.events)
        if (e.type == mechanics::Event::Maximum) {
            r.snap_pressure = e.y;
            break;
        }
    if (r.bistable) {
        // the full-range curve, since the stable state may lie beyond the origami band
        mechanics::FdOptions full;
        full.samples = c.analysis.fd_samples;
        r.elongation = mechanics::predict_elongation(c.metashell, mechanics::metashell_fd(s.shell_row, c.material, full));
    }
    return r;
}

inline mechanics::SequenceResult sequence_from_config(const DesignConfig& c)
{
    mechanics::SequenceOptions o;
    o.steps = c.analysis.sequence_steps;
    o.samples = c.analysis.sequence_samples;
    return mechanics::simulate_sequence(c.segment_specs(), c.material, o);
}

inline std::string sequence_to_csv(const mechanics::SequenceResult& r)
{
    std::ostringstream os;
    std::size_t n = r.d.empty() ? 0 : r.d.front().size();
    os << "step,branch,V_mL,P_mbar";
    for (std::size_t i = 0; i < n; ++i) os << ",d" << i << "_mm";
    for (std::size_t i = 0; i < n; ++i) os << ",H" << i << "_mm";
    os << '\n';
    for (std::size_t k = 0; k < r.V.size(); ++k) {
        os << k << ',' << r.branch[k] << ',' << mechanics::format_sig(r.V[k]) << ',' << mechanics::format_sig(r.P[k]);
        for (double x : r.d[k]) os << ',' << mechanics::format_sig(x);
        for (double x : r.H[k]) os << ',' << mechanics::format_sig(x);
        os << '\n';
    }
    return os.str();
}

inline std::string snap_events_to_csv(const mechanics::SequenceResult& r)
{
    std::ostringstream os;
    os << "segment,branch,V_mL,P_mbar,step,jump\n";
    for (const auto& e : r.events)
        os << e.segment << ',' << e.branch << ',' << mechanics::format_sig(e.V) << ',' << mechanics::format_sig(e.P) << ','
           << e.step << ',' << (e.jump ? 1 : 0) << '\n';
    return os.str();
}

struct SweepRow {
    double value = 0;
    bool ok = false;
    bool bistable = false;
    double snap_pressure = NAN, elongation = NAN;
    std::string geometry = "ok";  // or the error kind of the printable geometry
    std::string error;
};

struct SweepTable {
    std::string path;
    std::vector<SweepRow> rows;

    std::string to_csv() const
    {
        std::ostringstream os;
        os << "value,status,bistable,snap_pressure_mbar,elongation_pct,geometry,error\n";
        auto num = [](double x) { return std::isfinite(x) ? mechanics::format_sig(x) : std::string(); };
        for (const auto& r : rows) {
            std::string err = r.error;
            std::replace(err.begin(), err.end(), ',', ';');
            std::replace(err.begin(), err.end(), '\n', ' ');
            os << mechanics::format_sig(r.value) << ',' << (r.ok ? "ok" : "error") << ',' << (r.bistable ? 1 : 0) << ','
               << num(r.snap_pressure) << ',' << num(r.elongation) << ',' << r.geometry << ',' << err << '\n';
        }
        return os.str();
    }
};

inline json::json_pointer sweep_pointer(const DesignConfig& c, const std::string& path)
{
    json doc = to_json(c);
    json::json_pointer ptr;
    try {
        ptr = json::json_pointer(path);
    } catch (const json::exception&) {
        fail(ErrorKind::BadPath, "'" + path + "' is not a JSON pointer");
    }
    if (path.empty() || !doc.contains(ptr) || !doc.at(ptr).is_number())
        fail(ErrorKind::BadPath, "'" + path + "' does not address a numeric field");
    return ptr;
}

inline SweepRow sweep_row(const DesignConfig& base, const json::json_pointer& ptr, double value)
{
    SweepRow row;
    row.value = value;
    try {
        json doc = to_json(base);
        if (doc.at(ptr).is_number_integer()) {
            if (value != std::floor(value)) fail(ErrorKind::SchemaError, ptr.to_string() + ": expected an integer");
            doc[ptr] = static_cast<long long>(value);
        } else {
            doc[ptr] = value;
        }
        DesignConfig c = from_json(doc, false);
        try {
            metashell::build_unit_cell_outline(c.metashell);
        } catch (const Error& e) {
            row.geometry = kind_name(e.kind());
        }
        CurveSet s = evaluate_curves(c);
        row.bistable = s.bistable;
        row.snap_pressure = s.snap_pressure;
        row.elongation = s.elongation;
        row.ok = true;
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

// Rows are independent and evaluated concurrently.
inline SweepTable run_sweep(const DesignConfig& c, const std::string& path, const std::vector<double>& values,
                            unsigned threads = 0)
{
    auto ptr = sweep_pointer(c, path);
    SweepTable t;
    t.path = path;
    t.rows.resize(values.size());
    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> jobs;
    for (unsigned w = 0; w < std::min<std::size_t>(n, values.size()); ++w)
        jobs.emplace_back([&, w] {
            for (std::size_t i = w; i < values.size(); i += n) t.rows[i] = sweep_row(c, ptr, values[i]);
        });
    for (auto& j : jobs) j.join();
    return t;
}

} // namespace metaori::config
