#ifndef NSKR_RUN_HPP
#define NSKR_RUN_HPP

#include <optional>

#include "nskr/tracker.hpp"

namespace nskr {

struct RunOutcome {
    RunStatus status = RunStatus::bounded;
    double t_reached = 0.0;
    double e_p_final = 0.0;
    double e_p0 = 0.0;
    double midband_max = 0.0;
    double mass_drift = 0.0;  // |a_hat(0)(T) - a_hat(0)(0)|
    std::vector<TrackerRow> history;
};

// ETD2 march until the horizon or a monitor trips; all failures are outcomes.
RunOutcome global_run(const FlowState& data, const PhysParams& params, const SolverConfig& cfg,
                      const TransformEngine& engine,
                      std::vector<FlowState>* snapshots = nullptr, int snapshot_stride = 0);

}  // namespace nskr

#endif
