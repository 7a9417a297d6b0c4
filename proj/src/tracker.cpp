#include <cmath>

#include "nskr/tracker.hpp"

namespace nskr {

AprioriTracker::AprioriTracker(const GridSpec& grid, const PhysParams& params,
                               const SolverConfig& cfg)
    : params_(params),
      cfg_(cfg),
      decomp_(DyadicDecomposition::standard(grid)),
      fb_trace_(decomp_.j_min(), decomp_.j_max()),
      besov_trace_(decomp_.j_min(), decomp_.j_max()),
      grad_trace_(decomp_.j_min(), decomp_.j_max()) {}

void AprioriTracker::add_sample(const FlowState& state, const TransformEngine& engine) {
    SpectralField ga = gradient(state.a);
    ga *= cplx(params_.eps, 0.0);

    auto fb = stacked_block_norms({&state.a, &ga, &state.m}, decomp_, cfg_.p,
                                  NormFlavor::fourier_besov);
    auto bq = stacked_block_norms({&state.a, &ga, &state.m}, decomp_, cfg_.q, NormFlavor::besov,
                                  &engine);
    auto gb = block_norms(ga, decomp_, cfg_.p, NormFlavor::fourier_besov);

    if (fb_trace_.samples() == 0) {
        e_p0_ = aggregate_blocks(fb, decomp_.j_min(), 3.0 / cfg_.p - 1.0, 1.0) +
                aggregate_blocks(fb, decomp_.j_min(), 3.0 / cfg_.p - 3.0, 1.0);
    }

    // instantaneous mid-band tracker of (a, m) at regularity 3/p - 1
    auto am = stacked_block_norms({&state.a, &state.m}, decomp_, cfg_.p, NormFlavor::fourier_besov);
    const double alpha = params_.rotation_threshold();
    const double beta = cfg_.beta_factor * std::max(alpha, 1e-300);
    double mid = aggregate_blocks(am, decomp_.j_min(), 3.0 / cfg_.p - 1.0, 1.0,
                                  alpha > 0 ? TruncationBand::middle(alpha, beta)
                                            : TruncationBand::all());
    midband_max_ = std::max(midband_max_, mid);

    AdmissibilityScan scan = scan_admissibility(state, params_, engine);
    if (scan.max_eps_a > cfg_.window_eps_a && window_violation_t_ < 0.0)
        window_violation_t_ = state.time;
    double eps_a_fb = params_.eps *
                      aggregate_blocks(block_norms(state.a, decomp_, cfg_.p,
                                                   NormFlavor::fourier_besov),
                                       decomp_.j_min(), 3.0 / cfg_.p, 1.0);
    if (eps_a_fb > cfg_.c1) smallness_ok_ = false;

    fb_trace_.append(state.time, fb);
    besov_trace_.append(state.time, bq);
    grad_trace_.append(state.time, gb);

    TrackerRow row;
    row.t = state.time;
    row.e_p = e_p();
    row.d_low = chemin_lerner_norm(besov_trace_, 3.0 / cfg_.q - 3.0 + 4.0 / cfg_.r, 1.0, cfg_.r);
    row.d_high = chemin_lerner_norm(besov_trace_, 3.0 / cfg_.q - 1.0 + 2.0 / cfg_.r, 1.0, cfg_.r);
    row.d_grad = chemin_lerner_norm(grad_trace_, 3.0 / cfg_.p - 1.0, 1.0, p_inf);
    row.eps_a_inf = scan.max_eps_a;
    row.min_density = scan.min_density;
    row.midband = mid;
    history_.push_back(row);
}

double AprioriTracker::e_p() const {
    if (fb_trace_.samples() == 0) return 0.0;
    double s = chemin_lerner_norm(fb_trace_, 3.0 / cfg_.p - 3.0, 1.0, p_inf);
    s += chemin_lerner_norm(fb_trace_, 3.0 / cfg_.p - 1.0, 1.0, p_inf);
    if (fb_trace_.samples() > 1)
        s += chemin_lerner_norm(fb_trace_, 3.0 / cfg_.p + 1.0, 1.0, 1.0);
    return s;
}

double AprioriTracker::d_pqr() const {
    if (besov_trace_.samples() < 2) return 0.0;
    double s = chemin_lerner_norm(besov_trace_, 3.0 / cfg_.q - 3.0 + 4.0 / cfg_.r, 1.0, cfg_.r);
    s += chemin_lerner_norm(besov_trace_, 3.0 / cfg_.q - 1.0 + 2.0 / cfg_.r, 1.0, cfg_.r);
    s += chemin_lerner_norm(grad_trace_, 3.0 / cfg_.p - 1.0, 1.0, p_inf);
    return s;
}

AprioriTracker track_apriori(const std::vector<FlowState>& traj, const PhysParams& params,
                             const SolverConfig& cfg, const TransformEngine& engine) {
    if (traj.empty()) throw std::invalid_argument("track_apriori: empty trajectory");
    AprioriTracker tr(traj.front().grid(), params, cfg);
    for (const FlowState& s : traj) tr.add_sample(s, engine);
    return tr;
}

}  // namespace nskr
