#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "../kresling/truss.hpp"
#include "../mesh/trimesh.hpp"
#include "../metashell/outline.hpp"
#include "beam.hpp"
#include "curves.hpp"

namespace metaori::mechanics {

enum class BarAreaModel { Membrane, Bending };

inline const char* to_string(BarAreaModel m) { return m == BarAreaModel::Membrane ? "membrane" : "bending"; }

struct MaterialParams {
    double E = 12.0;          // MPa
    double s_min = 0.3;       // stiffness scale at zero infill
    BarAreaModel bar_area_model = BarAreaModel::Membrane;
    double bar_area = 0.0;    // mm^2, overrides the model when > 0
    double bar_stiffness_factor = 1.0;
    double hinge_stiffness = 0.0;  // N mm / rad per mm of crease

    double stiffness_scale(double infill) const { return s_min + (1.0 - s_min) * infill; }
};

inline void validate(const MaterialParams& m)
{
    require(std::isfinite(m.E) && m.E > 0, ErrorKind::InvalidParams, "E must be > 0");
    require(m.s_min > 0 && m.s_min <= 1, ErrorKind::InvalidParams, "s_min must lie in (0, 1]");
    require(m.bar_area >= 0 && m.hinge_stiffness >= 0 && m.bar_stiffness_factor > 0, ErrorKind::InvalidParams,
            "truss stiffnesses must be >= 0");
}

inline double effective_bar_area(const kresling::KreslingParams& p, const MaterialParams& m)
{
    if (m.bar_area > 0) return m.bar_area;
    if (m.bar_area_model == BarAreaModel::Bending) return p.t_face * p.t_face * p.t_face / (p.b / 2.0);
    return p.t_face * p.b / 2.0;
}

inline kresling::TrussSettings truss_settings(const kresling::KreslingParams& p, const MaterialParams& m)
{
    kresling::TrussSettings s;
    s.E = m.E * m.bar_stiffness_factor;
    s.bar_area = effective_bar_area(p, m);
    s.hinge_stiffness = m.hinge_stiffness * m.bar_stiffness_factor;
    return s;
}

// Bistability of the clamped cosine arch needs Q = h/t above this.
inline constexpr double bistable_Q = 2.31;

struct FdOptions {
    int samples = 201;
    double d_max = 0.0;  // 0 selects 2h for the shell and the full shared range elsewhere
    double d_min = 0.0;  // < 0 adds a compressed range
    int row = 0;
    bool require_bistable = false;
};

inline BeamSpec beam_spec(const metashell::MetashellParams& p, const MaterialParams& m)
{
    return {p.l, p.h, p.t, p.depth, m.E};
}

inline std::vector<double> grid(double lo, double hi, int samples)
{
    require(samples >= 2 && hi > lo, ErrorKind::InvalidParams, "grid needs >= 2 samples on a non-empty range");
    std::vector<double> g(samples);
    for (int i = 0; i < samples; ++i) g[i] = lo + (hi - lo) * i / (samples - 1);
    return g;
}

// Per-row scale: two beams per cell, cols cells in parallel, infill stiffness.
inline double row_scale(const metashell::MetashellParams& p, const MaterialParams& m, int row)
{
    require(row >= 0 && row < p.rows, ErrorKind::InvalidParams, "row index out of range");
    double infill = static_cast<std::size_t>(row) < p.infill_per_row.size() ? p.infill_per_row[row] : 1.0;
    return 2.0 * p.cols * m.stiffness_scale(infill);
}

inline FDCurve metashell_fd(const metashell::MetashellParams& p, const MaterialParams& m, const FdOptions& o = {})
{
    validate(m);
    if (o.require_bistable && p.Q() < bistable_Q)
        fail(ErrorKind::ModelDomain, "Q = h/t = " + std::to_string(p.Q()) + " is below the bistability range of the beam model");
    require(p.cols >= 1 && p.depth > 0, ErrorKind::InvalidParams, "shell needs cols >= 1 and depth > 0");
    BeamSpec s = beam_spec(p, m);
    double dmax = o.d_max > 0 ? o.d_max : 2.0 * p.h;
    FDCurve c;
    c.role = CurveRole::Metashell;
    require(o.d_min <= 0, ErrorKind::InvalidParams, "d_min must be <= 0");
    c.d = grid(o.d_min, dmax, o.samples);
    HalfBeamRom rom(s);
    double k = row_scale(p, m, o.row);
    // continuation runs outward from the rest state in both directions
    std::vector<double> up, down;
    for (double x : c.d) (x >= 0 ? up : down).push_back(x);
    std::reverse(down.begin(), down.end());
    auto pu = rom.path(up), pd = rom.path(down);
    for (auto it = pd.rbegin(); it != pd.rend(); ++it) c.F.push_back(k * HalfBeamRom::beam_force(*it));
    for (std::size_t i = 0; i < pu.size(); ++i) c.F.push_back(up[i] == 0.0 ? 0.0 : k * HalfBeamRom::beam_force(pu[i]));
    return c;
}

// Oracle forces at the given displacements, scaled like metashell_fd.
inline std::vector<double> elastica_oracle(const metashell::MetashellParams& p, const MaterialParams& m,
                                           const std::vector<double>& ds, int segments = 240, int row = 0)
{
    validate(m);
    ElasticaChain chain(beam_spec(p, m), segments);
    double k = row_scale(p, m, row);
    std::vector<double> F;
    for (const auto& r : chain.path(ds)) F.push_back(k * r.force);
    return F;
}

inline double elastica_oracle(const metashell::MetashellParams& p, const MaterialParams& m, double d)
{
    return elastica_oracle(p, m, std::vector<double>{d}).front();
}

inline double mesh_volume_mL(const TriMesh& facets)
{
    // every directed edge must be matched by its reverse exactly once
    std::vector<std::pair<int, int>> e;
    for (const Tri& t : facets.triangles)
        for (int k = 0; k < 3; ++k) e.emplace_back(t[k], t[(k + 1) % 3]);
    std::sort(e.begin(), e.end());
    if (e.empty()) fail(ErrorKind::OpenCavity, "no facets");
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i + 1 < e.size() && e[i] == e[i + 1]) fail(ErrorKind::OpenCavity, "facet orientation is inconsistent");
        if (!std::binary_search(e.begin(), e.end(), std::make_pair(e[i].second, e[i].first)))
            fail(ErrorKind::OpenCavity, "facet set has a boundary edge");
    }
    return std::abs(signed_volume(facets)) * units::mm3_to_mL;
}

inline double cavity_volume(const kresling::KreslingState& s) { return mesh_volume_mL(kresling::closed_surface(s)); }

// Origami stack under a uniform per-layer stretch: H = H0 + d / layers.
class OrigamiModel {
public:
    OrigamiModel(const kresling::KreslingParams& p, const MaterialParams& m)
        : origami_(kresling::build_origami(p)), settings_(truss_settings(p, m)),
          energy_(p, origami_.closure, settings_)
    {
        validate(m);
        layers_ = origami_.state.layers();
        H0_ = origami_.closure.H;
        band_ = kresling::feasible_band(p);
    }

    int layers() const { return layers_; }
    double rest_height() const { return H0_; }
    double total_rest_height() const { return H0_ * layers_; }
    double d_min() const { return layers_ * (band_.lo - H0_); }
    double d_max() const { return layers_ * (band_.hi - H0_); }
    const kresling::Origami& origami() const { return origami_; }

    double layer_height(double d) const
    {
        double H = H0_ + d / layers_;
        if (!(H >= band_.lo && H <= band_.hi))
            fail(ErrorKind::InfeasibleHeight, "layer height " + std::to_string(H) + " outside the feasible band");
        return H;
    }

    double energy(double d) const
    {
        double H = layer_height(d);
        return layers_ * energy_.value(H, kresling::optimal_twist(energy_, H));
    }

    // Central difference of the energy.
    double force(double d, double step) const { return (energy(d + step) - energy(d - step)) / (2.0 * step); }

    // dU/dd at the optimal twist (the twist derivative vanishes there).
    double exact_force(double d) const
    {
        double H = layer_height(d);
        return energy_(H, kresling::optimal_twist(energy_, H)).g[0];
    }

    kresling::KreslingState state(double d) const
    {
        return kresling::kinematic_state(origami_, layer_height(d), settings_);
    }

    double volume(double d) const { return cavity_volume(state(d)); }

private:
    kresling::Origami origami_;
    kresling::TrussSettings settings_;
    kresling::LayerEnergy energy_;
    kresling::FeasibleBand band_{};
    int layers_ = 0;
    double H0_ = 0;
};

inline FDCurve origami_fd(const OrigamiModel& om, const std::vector<double>& ds, double step)
{
    FDCurve c;
    c.role = CurveRole::Origami;
    c.d = ds;
    for (double d : ds) c.F.push_back(om.force(d, step));
    return c;
}

inline FDCurve origami_fd(const kresling::KreslingParams& p, const MaterialParams& m, const FdOptions& o = {})
{
    OrigamiModel om(p, m);
    double hi = o.d_max > 0 ? o.d_max : 0.995 * om.d_max();
    auto ds = grid(std::max(o.d_min, 0.995 * om.d_min()), hi, o.samples);
    return origami_fd(om, ds, 1e-3 * hi);
}

// P = F / (dV/dd), V in mL and P in mbar.
inline PVCurve pv_curve(const FDCurve& combined, const std::function<double(double)>& volume_mL, double step = 0.0)
{
    require(combined.size() >= 3, ErrorKind::InvalidParams, "pv curve needs >= 3 samples");
    const double h = step > 0 ? step : 1e-3 * (combined.hi() - combined.lo());
    PVCurve pv;
    for (std::size_t i = 0; i < combined.size(); ++i) {
        double d = combined.d[i];
        double dV = (volume_mL(d + h) - volume_mL(d - h)) / (2.0 * h);
        if (!(dV >= 1e-9))
            fail(ErrorKind::DegenerateVolumeMap, "dV/dd = " + format_sig(dV) + " mL/mm at d = " + format_sig(d) + " mm");
        pv.d.push_back(d);
        pv.V.push_back(volume_mL(d));
        pv.P.push_back(combined.F[i] / (dV / units::mm3_to_mL) * units::Nmm2_to_mbar);
    }
    check_increasing(pv.V, "volume");
    pv.events = detect_events(pv);
    return pv;
}

// Stable displacement of the snapped row: the last crossing where F turns from negative to positive.
inline double stable_displacement(const FDCurve& meta)
{
    auto z = zero_crossings(meta);
    if (z.size() < 3) fail(ErrorKind::NotBistable, "force curve has no second stable equilibrium");
    double x = z.back();
    if (!(meta.at(x + 1e-6 * (meta.hi() - meta.lo())) > 0 || meta.F.back() > 0))
        fail(ErrorKind::NotBistable, "last zero crossing is not stable");
    return x;
}

// Extension of all rows to their second stable state relative to the printed (closed) height.
inline double predict_elongation(const metashell::MetashellParams& p, const FDCurve& meta)
{
    double d = stable_displacement(meta);
    return p.rows * d / p.height() * 100.0;
}

} // namespace metaori::mechanics
