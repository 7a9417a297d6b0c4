#ifndef NSKR_STEPPER_HPP
#define NSKR_STEPPER_HPP

#include <vector>

#include "nskr/dyadic.hpp"
#include "nskr/linear.hpp"
#include "nskr/nonlinearity.hpp"

namespace nskr {

enum class RunStatus { bounded, norm_growth, inadmissible_density, picard_divergence };
const char* to_string(RunStatus s);

struct SolverConfig {
    double h = 0.05;            // time step
    double horizon = 10.0;      // T
    double density_floor = 0.2;
    double window_eps_a = 0.5;  // ||eps a||_Linf admissibility window
    double c1 = 1.0;            // smallness monitor on ||eps a||_{FB^{3/p}}
    double picard_tol = 1e-10;
    int picard_max_iters = 14;
    double picard_ball = 1.0;   // data Z-norm guard
    double p = 2.0;             // tracker indices
    double q = 8.0 / 3.0;
    double r = 8.0;
    double g_bound = 4.0;       // norm-growth proxy: E_p(T) <= g_bound * E_{p,0}
    double beta_factor = 16.0;  // mid/high split beta = beta_factor * |Omega| eps
    int sample_stride = 5;      // tracker sampling interval in steps
    NonlinearityVariant variant = NonlinearityVariant::full;

    void validate(bool trackers_enabled = true) const;
};

// Per-mode e^{hA}, phi1(hA), phi2(hA) on the dealias-retained lattice.
class PropagatorCache {
  public:
    PropagatorCache(const GridSpec& grid, const PhysParams& params, double h);

    const GridSpec& grid() const { return grid_; }
    const PhysParams& params() const { return params_; }
    double h() const { return h_; }
    std::size_t retained() const { return index_.size(); }

    // u <- E u + h phi1 f   then corrector  u <- u + h phi2 df  via the stage calls
    void predictor(FlowState& state, const SpectralField& forcing) const;
    void corrector(FlowState& state, const SpectralField& df) const;

  private:
    GridSpec grid_;
    PhysParams params_;
    double h_;
    std::vector<std::size_t> index_;
    std::vector<PhiSet> phis_;
};

// One ETD2 step (exponential trapezoidal rule): two nonlinearity evaluations.
FlowState etd_step(const FlowState& state, const PropagatorCache& cache,
                   const TransformEngine& engine, const SolverConfig& cfg);

// ---------------------------------------------------------------- Picard

// Z-norm of Appendix A computed on a sampled trajectory (uniform fine grid).
double z_norm(const std::vector<FlowState>& traj, const PhysParams& params, double p,
              const DyadicDecomposition& d);

struct PicardResult {
    std::vector<FlowState> trajectory;   // converged iterate on the fine grid
    std::vector<double> distances;       // successive-iterate Z-distances
    std::vector<double> ratios;          // contraction ratios
    RunStatus status = RunStatus::bounded;
    int iterations = 0;
    double data_z_norm = 0.0;
    bool ball_ok = true;
};

// Fixed-point iteration of the Duhamel map, starting from the linear solution.
PicardResult picard_local_solve(const FlowState& s0, double t_end, const PhysParams& params,
                                const SolverConfig& cfg, const TransformEngine& engine,
                                int fine_steps = 100);

}  // namespace nskr

#endif
