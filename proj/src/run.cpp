#include <cmath>

#include "nskr/run.hpp"

namespace nskr {

RunOutcome global_run(const FlowState& data, const PhysParams& params, const SolverConfig& cfg,
                      const TransformEngine& engine, std::vector<FlowState>* snapshots,
                      int snapshot_stride) {
    cfg.validate();
    RunOutcome out;
    FlowState state = data;
    dealias_truncate(state.a);
    dealias_truncate(state.m);
    const cplx mass0 = state.a.at(0, 0);

    PropagatorCache cache(state.grid(), params, cfg.h);
    AprioriTracker tracker(state.grid(), params, cfg);
    tracker.add_sample(state, engine);
    if (snapshots && snapshot_stride > 0) snapshots->push_back(state);

    const long steps = std::lround(std::ceil(cfg.horizon / cfg.h - 1e-9));
    out.status = RunStatus::bounded;
    for (long k = 1; k <= steps; ++k) {
        try {
            state = etd_step(state, cache, engine, cfg);
        } catch (const DensityFloorViolation&) {
            out.status = RunStatus::inadmissible_density;
            break;
        }
        out.t_reached = state.time;
        bool sample_now = (k % cfg.sample_stride == 0) || k == steps;
        if (sample_now) {
            tracker.add_sample(state, engine);
            const TrackerRow& row = tracker.history().back();
            if (row.min_density <= cfg.density_floor) {
                out.status = RunStatus::inadmissible_density;
                break;
            }
            if (tracker.e_p() > cfg.g_bound * tracker.e_p0()) {
                out.status = RunStatus::norm_growth;
                break;
            }
        }
        if (snapshots && snapshot_stride > 0 && k % snapshot_stride == 0)
            snapshots->push_back(state);
    }
    out.mass_drift = std::abs(state.a.at(0, 0) - mass0);
    out.e_p_final = tracker.e_p();
    out.e_p0 = tracker.e_p0();
    out.midband_max = tracker.midband_max();
    out.history = tracker.history();
    return out;
}

}  // namespace nskr
