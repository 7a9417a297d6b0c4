#ifndef NSKR_TRACKER_HPP
#define NSKR_TRACKER_HPP

#include <vector>

#include "nskr/dyadic.hpp"
#include "nskr/norms.hpp"
#include "nskr/params.hpp"
#include "nskr/stepper.hpp"

namespace nskr {

struct TrackerRow {
    double t = 0;
    double e_p = 0;          // cumulative E_p(t)
    double d_low = 0;        // L~r Besov_q at 3/q-3+4/r
    double d_high = 0;       // L~r Besov_q at 3/q-1+2/r
    double d_grad = 0;       // L~inf FB of eps grad a at 3/p-1
    double eps_a_inf = 0;    // ||eps a(t)||_Linf
    double min_density = 0;
    double midband = 0;      // instantaneous FB mid-band norm of (a,m) at 3/p-1
};

// Time-integrated a priori functionals E_p(T), D_{p,q,r}(T) and the pointwise
// admissibility monitors; samples are appended along a run.
class AprioriTracker {
  public:
    AprioriTracker(const GridSpec& grid, const PhysParams& params, const SolverConfig& cfg);

    void add_sample(const FlowState& state, const TransformEngine& engine);

    double e_p() const;
    double d_pqr() const;
    double e_p0() const { return e_p0_; }
    double midband_max() const { return midband_max_; }
    double window_violation_time() const { return window_violation_t_; }  // <0: never
    bool smallness_ok() const { return smallness_ok_; }

    const std::vector<TrackerRow>& history() const { return history_; }
    std::size_t samples() const { return fb_trace_.samples(); }

  private:
    PhysParams params_;
    SolverConfig cfg_;
    DyadicDecomposition decomp_;
    TimeTrace fb_trace_;       // FB_p blocks of (a, eps grad a, m)
    TimeTrace besov_trace_;    // Besov_q blocks of (a, eps grad a, m)
    TimeTrace grad_trace_;     // FB_p blocks of eps grad a
    double e_p0_ = 0.0;
    double midband_max_ = 0.0;
    double window_violation_t_ = -1.0;
    bool smallness_ok_ = true;
    std::vector<TrackerRow> history_;
};

// Tracker over a precomputed trajectory.
AprioriTracker track_apriori(const std::vector<FlowState>& traj, const PhysParams& params,
                             const SolverConfig& cfg, const TransformEngine& engine);

}  // namespace nskr

#endif
