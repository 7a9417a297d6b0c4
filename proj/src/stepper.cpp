#include <cmath>
#include <stdexcept>

#include "nskr/dyadic.hpp"
#include "nskr/norms.hpp"
#include "nskr/stepper.hpp"

namespace nskr {

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::bounded: return "bounded";
        case RunStatus::norm_growth: return "norm_growth";
        case RunStatus::inadmissible_density: return "inadmissible_density";
        case RunStatus::picard_divergence: return "picard_divergence";
    }
    return "?";
}

void SolverConfig::validate(bool trackers_enabled) const {
    if (!(h > 0)) throw std::invalid_argument("SolverConfig: step size must be positive");
    if (!(horizon > 0)) throw std::invalid_argument("SolverConfig: horizon must be positive");
    if (!trackers_enabled) return;
    if (!(2.0 <= p && p < q && q < 3.0))
        throw std::invalid_argument("SolverConfig: tracker indices need 2 <= p < q < 3");
    if (!(2.0 < r && std::isfinite(r)))
        throw std::invalid_argument("SolverConfig: tracker index needs 2 < r < inf");
    double lim = std::min(1.0 / p - 1.0 / q, 3.0 / (2.0 * q) - 0.25);
    if (!(1.0 / r <= lim + 1e-12))
        throw std::invalid_argument(
            "SolverConfig: hypothesis 1/r <= min{1/p - 1/q, 3/(2q) - 1/4} violated");
}

PropagatorCache::PropagatorCache(const GridSpec& grid, const PhysParams& params, double h)
    : grid_(grid), params_(params), h_(h) {
    const int cut = grid.dealias_cutoff();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto k = grid.wave_index(i);
        if (std::abs(k[0]) <= cut && std::abs(k[1]) <= cut && std::abs(k[2]) <= cut)
            index_.push_back(i);
    }
    phis_.reserve(index_.size());
    for (std::size_t i : index_) {
        ModeMatrix m = assemble_mode_matrix(grid.xi(i), params, true);
        phis_.push_back(mode_phi_set(m.a, h));
    }
}

namespace {

inline Vec4 gather(const FlowState& s, std::size_t i) {
    return Vec4(s.a.at(0, i), s.m.at(0, i), s.m.at(1, i), s.m.at(2, i));
}
inline void scatter(FlowState& s, std::size_t i, const Vec4& u) {
    s.a.at(0, i) = u(0);
    for (int c = 0; c < 3; ++c) s.m.at(c, i) = u(1 + c);
}
inline Vec4 gather_forcing(const SpectralField& f, std::size_t i) {
    return Vec4(0.0, f.at(0, i), f.at(1, i), f.at(2, i));
}

}  // namespace

void PropagatorCache::predictor(FlowState& state, const SpectralField& forcing) const {
    for (std::size_t a = 0; a < index_.size(); ++a) {
        std::size_t i = index_[a];
        const PhiSet& ph = phis_[a];
        Vec4 u = gather(state, i);
        scatter(state, i, Vec4(ph.exp_h * u + h_ * (ph.phi1 * gather_forcing(forcing, i))));
    }
}

void PropagatorCache::corrector(FlowState& state, const SpectralField& df) const {
    for (std::size_t a = 0; a < index_.size(); ++a) {
        std::size_t i = index_[a];
        Vec4 u = gather(state, i);
        scatter(state, i, Vec4(u + h_ * (phis_[a].phi2 * gather_forcing(df, i))));
    }
}

FlowState etd_step(const FlowState& state, const PropagatorCache& cache,
                   const TransformEngine& engine, const SolverConfig& cfg) {
    if (!(state.grid() == cache.grid()))
        throw std::invalid_argument("etd_step: state/cache grid mismatch");
    SpectralField f0 = eval_nonlinearity(state, cache.params(), engine, cfg.variant,
                                         cfg.density_floor);
    FlowState next = state;
    cache.predictor(next, f0);
    next.time = state.time + cache.h();
    SpectralField f1 = eval_nonlinearity(next, cache.params(), engine, cfg.variant,
                                         cfg.density_floor);
    f1 -= f0;
    cache.corrector(next, f1);
    return next;
}

// ---------------------------------------------------------------- Picard

double z_norm(const std::vector<FlowState>& traj, const PhysParams& params, double p,
              const DyadicDecomposition& d) {
    if (traj.empty()) throw std::invalid_argument("z_norm: empty trajectory");
    const std::size_t m = traj.size();
    const double sm1 = 3.0 / p - 1.0, s0 = 3.0 / p, sp1 = 3.0 / p + 1.0;

    // per-sample full norms for the plain time-integrals, per-block rows for the tilde piece
    std::vector<double> a_m1(m), a_0(m), ga_m1(m), ga_0(m), ga_p1(m), mm_m1(m), mm_0(m), mm_p1(m);
    TimeTrace ga_trace(d.j_min(), d.j_max());
    for (std::size_t k = 0; k < m; ++k) {
        const FlowState& s = traj[k];
        SpectralField ga = gradient(s.a);
        ga *= cplx(params.eps, 0.0);
        auto ab = block_norms(s.a, d, p, NormFlavor::fourier_besov);
        auto gb = block_norms(ga, d, p, NormFlavor::fourier_besov);
        auto mb = block_norms(s.m, d, p, NormFlavor::fourier_besov);
        a_m1[k] = aggregate_blocks(ab, d.j_min(), sm1, 1.0);
        a_0[k] = aggregate_blocks(ab, d.j_min(), s0, 1.0);
        ga_m1[k] = aggregate_blocks(gb, d.j_min(), sm1, 1.0);
        ga_0[k] = aggregate_blocks(gb, d.j_min(), s0, 1.0);
        ga_p1[k] = aggregate_blocks(gb, d.j_min(), sp1, 1.0);
        mm_m1[k] = aggregate_blocks(mb, d.j_min(), sm1, 1.0);
        mm_0[k] = aggregate_blocks(mb, d.j_min(), s0, 1.0);
        mm_p1[k] = aggregate_blocks(mb, d.j_min(), sp1, 1.0);
        ga_trace.append(traj[k].time, std::move(gb));
    }
    auto time_lr = [&](const std::vector<double>& v, double r) {
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < m; ++k) {
            double dt = traj[k + 1].time - traj[k].time;
            acc += 0.5 * dt * (std::pow(v[k], r) + std::pow(v[k + 1], r));
        }
        return std::pow(acc, 1.0 / r);
    };
    double out = 0.0;
    out += time_lr(a_m1, 2.0) + time_lr(a_0, 2.0);
    out += chemin_lerner_norm(ga_trace, sm1, 1.0, p_inf);  // tilde L^inf piece
    out += time_lr(ga_m1, 2.0) + time_lr(ga_0, 2.0) + time_lr(ga_p1, 1.0);
    out += time_lr(mm_m1, 2.0) + time_lr(mm_0, 2.0) + time_lr(mm_p1, 1.0);
    return out;
}

PicardResult picard_local_solve(const FlowState& s0, double t_end, const PhysParams& params,
                                const SolverConfig& cfg, const TransformEngine& engine,
                                int fine_steps) {
    const GridSpec& g = s0.grid();
    DyadicDecomposition d = DyadicDecomposition::standard(g);
    const double h = t_end / fine_steps;
    PropagatorCache cache(g, params, h);

    PicardResult res;
    {
        // ball guard on the static data norm ||(a0, eps grad a0, m0)||_{FB^{3/p-1} cap FB^{3/p}}
        SpectralField ga = gradient(s0.a);
        ga *= cplx(params.eps, 0.0);
        auto blocks = stacked_block_norms({&s0.a, &ga, &s0.m}, d, cfg.p, NormFlavor::fourier_besov);
        res.data_z_norm = aggregate_blocks(blocks, d.j_min(), 3.0 / cfg.p - 1.0, 1.0) +
                          aggregate_blocks(blocks, d.j_min(), 3.0 / cfg.p, 1.0);
        res.ball_ok = res.data_z_norm <= cfg.picard_ball;
    }

    // iterate 0: linear solution on the fine grid
    std::vector<double> times(fine_steps + 1);
    for (int k = 0; k <= fine_steps; ++k) times[k] = s0.time + k * h;
    std::vector<FlowState> cur = propagate_linear(s0, params, times);

    std::vector<SpectralField> forcing;
    forcing.reserve(times.size());
    int stall = 0;
    double prev_dist = -1.0;
    for (int it = 1; it <= cfg.picard_max_iters; ++it) {
        // N over the previous iterate
        forcing.clear();
        bool floor_hit = false;
        for (const FlowState& s : cur) {
            try {
                forcing.push_back(eval_nonlinearity(s, params, engine, cfg.variant,
                                                    cfg.density_floor));
            } catch (const DensityFloorViolation&) {
                floor_hit = true;
                break;
            }
        }
        if (floor_hit) {
            res.status = RunStatus::inadmissible_density;
            res.trajectory = std::move(cur);
            return res;
        }
        // Duhamel update: exponential trapezoid against the sampled forcing
        std::vector<FlowState> next;
        next.reserve(times.size());
        next.push_back(s0);
        FlowState acc = s0;
        for (int k = 0; k < fine_steps; ++k) {
            cache.predictor(acc, forcing[k]);
            SpectralField df = forcing[k + 1];
            df -= forcing[k];
            cache.corrector(acc, df);
            acc.time = times[k + 1];
            next.push_back(acc);
        }
        // Z-distance between iterates
        std::vector<FlowState> diff = next;
        for (std::size_t k = 0; k < diff.size(); ++k) {
            diff[k].a -= cur[k].a;
            diff[k].m -= cur[k].m;
        }
        double dist = z_norm(diff, params, cfg.p, d);
        res.distances.push_back(dist);
        if (prev_dist >= 0.0) {
            double ratio = prev_dist > 0.0 ? dist / prev_dist : 0.0;
            res.ratios.push_back(ratio);
            stall = ratio >= 1.0 ? stall + 1 : 0;
            if (stall >= 3) {
                res.status = RunStatus::picard_divergence;
                res.trajectory = std::move(next);
                res.iterations = it;
                return res;
            }
        }
        prev_dist = dist;
        cur = std::move(next);
        res.iterations = it;
        double scale = z_norm(cur, params, cfg.p, d);
        if (dist <= cfg.picard_tol * std::max(scale, 1e-30)) break;
    }
    res.trajectory = std::move(cur);
    res.status = RunStatus::bounded;
    return res;
}

}  // namespace nskr
