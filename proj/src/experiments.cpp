#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "nskr/estimates.hpp"
#include "nskr/experiments.hpp"
#include "nskr/fields_io.hpp"
#include "nskr/linear.hpp"
#include "nskr/run.hpp"

namespace fs = std::filesystem;

namespace nskr {

namespace {

using clock_type = std::chrono::steady_clock;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class ResultWriter {
  public:
    ResultWriter(const ExperimentConfig& cfg) : cfg_(cfg), start_(clock_type::now()) {
        dir_ = fs::path(cfg.output_dir) /
               (std::string(to_string(cfg.kind)) + "-" + hash_hex(cfg.config_hash));
        if (fs::exists(dir_)) {
            std::ifstream prev(dir_ / "config.txt");
            std::stringstream ss;
            ss << prev.rdbuf();
            if (ss.str() != cfg.source_text)
                throw std::runtime_error("output directory " + dir_.string() +
                                         " holds results for a different config");
        }
        fs::create_directories(dir_);
        std::ofstream(dir_ / "config.txt") << cfg.source_text;
        csv_.open(dir_ / "result.csv");
    }

    void csv_header(const std::string& cols) { csv_ << cols << ",config_hash,wall_time_s\n"; }
    void csv_row(const std::string& cols) {
        csv_ << cols << "," << hash_hex(cfg_.config_hash) << "," << fmt(elapsed()) << "\n";
    }
    void check(const std::string& name, bool pass, double value, double threshold) {
        checks_.emplace_back(name, pass, value, threshold);
        all_pass_ = all_pass_ && pass;
    }
    void note(const std::string& line) { notes_.push_back(line); }

    void plot_file(const std::string& name, const std::string& header,
                   const std::vector<std::string>& rows) {
        std::ofstream out(dir_ / name);
        out << header << "\n";
        for (const auto& r : rows) out << r << "\n";
    }

    ExperimentOutcome finish() {
        std::ofstream sum(dir_ / "summary.txt");
        sum << "experiment = " << to_string(cfg_.kind) << "\n";
        sum << "config_hash = " << hash_hex(cfg_.config_hash) << "\n";
        sum << "seed = " << cfg_.seed << "\n";
        for (const auto& n : notes_) sum << n << "\n";
        for (const auto& [name, pass, value, thr] : checks_)
            sum << "check " << name << " = " << (pass ? "pass" : "FAIL") << " (value " << fmt(value)
                << ", threshold " << fmt(thr) << ")\n";
        sum << "overall = " << (all_pass_ ? "pass" : "FAIL") << "\n";
        ExperimentOutcome out;
        out.exit_code = 0;
        out.all_checks_pass = all_pass_;
        out.result_dir = dir_.string();
        return out;
    }

    double elapsed() const {
        return std::chrono::duration<double>(clock_type::now() - start_).count();
    }
    std::string dir() const { return dir_.string(); }

  private:
    const ExperimentConfig& cfg_;
    fs::path dir_;
    std::ofstream csv_;
    std::vector<std::tuple<std::string, bool, double, double>> checks_;
    std::vector<std::string> notes_;
    bool all_pass_ = true;
    clock_type::time_point start_;
};

// ------------------------------------------------------------ linear decay

ExperimentOutcome run_linear_decay(const ExperimentConfig& cfg) {
    ResultWriter w(cfg);
    w.csv_header("j,xi_norm,omega,eps,abscissa,bound,margin");
    // mode-level sweep points are pure and independent: dispatch to workers
    struct Point {
        double j, om, ep;
        DecayCheckRow row;
    };
    std::vector<Point> points;
    for (double om : cfg.sweep_omega)
        for (double ep : cfg.sweep_eps) {
            if (std::abs(om) * ep > 1.0) continue;  // regime of interest
            for (double jd : cfg.sweep_j) points.push_back({jd, om, ep, {}});
        }
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            PhysParams p = cfg.params;
            p.omega = points[i].om;
            p.eps = points[i].ep;
            double radius = 1.5 * std::ldexp(1.0, int(points[i].j));
            Xi xi{radius / std::sqrt(3.0), radius / std::sqrt(3.0), radius / std::sqrt(3.0)};
            points[i].row = check_mode_decay(xi, p);
        }
    };
    const int workers = std::max(1, cfg.workers);
    if (workers == 1 || points.size() < 8) {
        work(0, points.size());
    } else {
        std::vector<std::future<void>> futs;
        std::size_t chunk = (points.size() + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            std::size_t lo = t * chunk, hi = std::min(points.size(), lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, work, lo, hi));
        }
        for (auto& f : futs) f.get();
    }
    double worst_margin = std::numeric_limits<double>::infinity();
    std::vector<std::string> plot_rows;
    for (const Point& pt : points) {
        worst_margin = std::min(worst_margin, pt.row.margin);
        w.csv_row(fmt(pt.j) + "," + fmt(pt.row.xi_norm) + "," + fmt(pt.om) + "," + fmt(pt.ep) +
                  "," + fmt(pt.row.abscissa) + "," + fmt(pt.row.bound) + "," +
                  fmt(pt.row.margin));
    }
    // decay-rate fit across the low band at the configured (omega, eps)
    PhysParams p = cfg.params;
    std::vector<std::string> fit_rows;
    std::vector<double> lx, ly;
    for (double jd : cfg.sweep_j) {
        double radius = 1.5 * std::ldexp(1.0, int(jd));
        if (radius > 0.5 * p.rotation_threshold()) continue;
        // horizontal wavevectors carry the slow Theta-rate mode
        Xi xi{radius * 0.6, radius * 0.8, 0.0};
        ModeMatrix m = assemble_mode_matrix(xi, p, true);
        Vec4 u0;
        u0 << 1.0, 0.4, cplx(0.2, 0.3), 0.1;
        double t_end = 5.0 / decay_rate_theta(radius, p.omega, p.eps);
        double rate = fit_mode_decay_rate(m, u0, t_end, 4000);
        lx.push_back(std::log2(radius));
        ly.push_back(std::log2(rate));
        fit_rows.push_back(fmt(std::log2(radius)) + " " + fmt(std::log2(rate)));
    }
    if (lx.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        double n = double(lx.size());
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        w.note("low_band_rate_slope = " + fmt(slope));
        w.check("low_band_rate_slope_4", std::abs(slope - 4.0) <= 0.1, slope, 4.0);
    }
    w.plot_file("plot_decay.dat", "# log2_xi log2_rate", fit_rows);
    w.check("all_margins_nonneg", worst_margin >= cfg.thresholds.at("decay_margin"), worst_margin,
            cfg.thresholds.at("decay_margin"));
    return w.finish();
}

// -------------------------------------------------------- energy exponents

ExperimentOutcome run_energy_exponents(const ExperimentConfig& cfg) {
    ResultWriter w(cfg);
    w.csv_header("band,r,j,gain,slope,expected");
    bool ok = true;
    const double tol = cfg.thresholds.at("energy_slope_tol");
    std::vector<std::string> plot_rows;
    for (double r : {1.0, 2.0}) {
        for (int band = 0; band < 2; ++band) {
            bool low = band == 0;
            std::vector<int> blocks;
            for (double jd : (low ? cfg.sweep_j : cfg.sweep_j_high)) blocks.push_back(int(jd));
            if (blocks.empty()) continue;
            EnergyFitResult res = verify_energy_estimate(cfg.params, r, blocks, low, 1.5, 4, 4000,
                                                         cfg.seed);
            for (const auto& row : res.rows) {
                w.csv_row(std::string(low ? "low" : "high") + "," + fmt(r) + "," +
                          fmt(row.j) + "," + fmt(row.gain) + "," + fmt(res.slope) + "," +
                          fmt(res.expected));
                plot_rows.push_back(fmt(row.j) + " " + fmt(std::log2(row.gain)));
            }
            bool pass = std::abs(res.slope - res.expected) <= tol;
            ok = ok && pass;
            w.check(std::string("slope_") + (low ? "low_r" : "high_r") + fmt(r), pass, res.slope,
                    res.expected);
        }
    }
    w.plot_file("plot_energy.dat", "# j log2_gain", plot_rows);
    (void)ok;
    return w.finish();
}

// -------------------------------------------------------------- strichartz

ExperimentOutcome run_strichartz(const ExperimentConfig& cfg) {
    ResultWriter w(cfg);
    w.csv_header("omega,norm,log2_omega,log_norm");
    GridSpec grid = GridSpec::cube(cfg.grid_n, cfg.l_over_2pi);
    TransformEngine engine(grid);
    DyadicDecomposition d = DyadicDecomposition::standard(grid);
    int j_hi = d.j_max();
    int j_lo = std::max(d.j_min(), j_hi - 1);
    FlowState datum = strichartz_packet(grid, j_lo, j_hi, cfg.amplitude, cfg.seed);

    // high-band requirement against the largest swept threshold
    double max_thr = 0.0;
    for (double om : cfg.sweep_omega) max_thr = std::max(max_thr, std::abs(om) * cfg.params.eps);
    if (!(std::ldexp(1.0, j_lo) > max_thr))
        throw std::invalid_argument(
            "strichartz: datum blocks do not satisfy 2^j > |Omega| eps across the sweep");

    // the lattice measurement needs only (q, r); p enters through the validated triple
    double q = cfg.exponent_triple[1], r = cfg.exponent_triple[2];
    StrichartzResult res = measure_strichartz(datum, cfg.params, cfg.sweep_omega, q, r, cfg.t_end,
                                              cfg.n_samples, engine);
    std::vector<std::string> plot_rows;
    for (const auto& pt : res.points) {
        w.csv_row(fmt(pt.omega) + "," + fmt(pt.norm) + "," + fmt(std::log2(pt.omega)) + "," +
                  fmt(std::log(pt.norm)));
        plot_rows.push_back(fmt(std::log2(pt.omega)) + " " + fmt(std::log(pt.norm)) + " " +
                            fmt(res.fit_residual));
    }
    w.plot_file("plot_strichartz.dat", "# log2_omega log_norm fit_residual", plot_rows);
    double target = -1.0 / r;
    w.note("fitted_slope = " + fmt(res.slope));
    w.note("target_slope = " + fmt(target));
    w.check("omega_slope", res.slope <= target + cfg.thresholds.at("strichartz_slope_tol"),
            res.slope, target);
    return w.finish();
}

// ------------------------------------------------------ estimate constants

ExperimentOutcome run_estimate_constants(const ExperimentConfig& cfg) {
    ResultWriter w(cfg);
    w.csv_header("estimate,grid_n,sample,ratio");
    const int n_samples = int(cfg.thresholds.at("estimate_samples"));
    const double refine_tol = cfg.thresholds.at("estimate_refine_factor");

    struct CaseStat {
        std::string name;
        double mean_small = 0, mean_large = 0, worst = 0;
    };
    std::vector<CaseStat> stats;
    for (int which = 0; which < 4; ++which) {
        CaseStat st;
        for (int pass = 0; pass < 2; ++pass) {
            int n = pass == 0 ? cfg.grid_n : cfg.grid_n * 2;
            GridSpec grid = GridSpec::cube(n, cfg.l_over_2pi);
            TransformEngine engine(grid);
            DyadicDecomposition d = DyadicDecomposition::standard(grid);
            double inner = d.coverage_inner() * 2.0;
            double outer = d.coverage_outer() / 4.0;
            double acc = 0;
            int counted = 0;
            for (int s = 0; s < n_samples; ++s) {
                unsigned seed = cfg.seed + 977 * s + which * 131071;
                SpectralField f = continuum_random_field(grid, inner, outer, seed);
                SpectralField g = continuum_random_field(grid, inner, outer, seed + 31);
                double ratio = 0;
                switch (which) {
                    case 0: {
                        st.name = "product_fb";
                        FourierProductCase lc{2.0, 1.0, 0.0, 1.0};
                        ratio = measure_product_fourier_besov(f, g, d, lc, engine).ratio;
                        break;
                    }
                    case 1: {
                        st.name = "product_besov";
                        BesovProductCase lc{3.0, 1.0, 0.5, 0.5};
                        ratio = measure_product_besov(f, g, d, lc, engine).ratio;
                        break;
                    }
                    case 2: {
                        st.name = "product_mixed";
                        MixedProductCase lc{2.0, 3.0, 0.5, 0.5, 1.0,
                                       d.coverage_outer() / 4.0, true};
                        ratio = measure_product_mixed(f, g, d, lc, engine).ratio;
                        break;
                    }
                    case 3: {
                        st.name = "composition";
                        SpectralField u = f;
                        u *= cplx(0.05 / std::max(fourier_besov_norm(f, d, 3.0 / 2.0, 2.0, 1.0),
                                                  1e-30),
                                  0.0);
                        auto rep = compose_analytic([](double b) { return b / (1.0 + b); }, u,
                                                    0.5, 2.0, d, engine);
                        ratio = rep.norm_ratio;
                        break;
                    }
                }
                if (!std::isfinite(ratio)) continue;
                acc += ratio;
                st.worst = std::max(st.worst, ratio);
                ++counted;
                if (s < 16) w.csv_row(st.name + "," + std::to_string(n) + "," +
                                      std::to_string(s) + "," + fmt(ratio));
            }
            double mean = acc / std::max(counted, 1);
            (pass == 0 ? st.mean_small : st.mean_large) = mean;
        }
        stats.push_back(st);
    }
    for (const auto& st : stats) {
        double drift = st.mean_large / std::max(st.mean_small, 1e-300);
        if (drift < 1.0) drift = 1.0 / drift;
        w.note(st.name + ": mean_N = " + fmt(st.mean_small) + ", mean_2N = " + fmt(st.mean_large) +
               ", worst = " + fmt(st.worst));
        w.check(st.name + "_refine_stable", drift <= refine_tol, drift, refine_tol);
        w.check(st.name + "_finite", std::isfinite(st.worst) && st.worst > 0, st.worst, 0.0);
    }
    return w.finish();
}

// ------------------------------------------------------------------ picard

ExperimentOutcome run_picard(const ExperimentConfig& cfg) {
    ResultWriter w(cfg);
    w.csv_header("iteration,distance,ratio");
    GridSpec grid = GridSpec::cube(cfg.grid_n, cfg.l_over_2pi);
    TransformEngine engine(grid);
    DyadicDecomposition d = DyadicDecomposition::standard(grid);

    std::map<int, double> amps;
    amps[d.j_max() - 1] = cfg.amplitude;
    FlowState s0 = random_flow_state(grid, d, amps, 3.0 / cfg.solver.p - 1.0, cfg.solver.p,
                                     cfg.seed);
    double t_end = cfg.solver.horizon;
    PicardResult res = picard_local_solve(s0, t_end, cfg.params, cfg.solver, engine, 100);
    for (std::size_t i = 0; i < res.distances.size(); ++i)
        w.csv_row(std::to_string(i + 1) + "," + fmt(res.distances[i]) + "," +
                  (i > 0 ? fmt(res.ratios[i - 1]) : std::string("nan")));
    bool contracting = res.status != RunStatus::picard_divergence;
    for (double r : res.ratios) contracting = contracting && r < 1.0;
    w.note(std::string("status = ") + to_string(res.status));
    w.check("contraction", contracting, res.ratios.empty() ? 0.0 : res.ratios.back(), 1.0);

    // cross-scheme agreement against ETD at the configured h
    SolverConfig run_cfg = cfg.solver;
    PropagatorCache cache(grid, cfg.params, run_cfg.h);
    FlowState state = s0;
    long steps = std::lround(t_end / run_cfg.h);
    for (long k = 0; k < steps; ++k) state = etd_step(state, cache, engine, run_cfg);
    const FlowState& pic = res.trajectory.back();
    FlowState diff = state;
    diff.a -= pic.a;
    diff.m -= pic.m;
    auto traj_norm = [&](const FlowState& s) {
        SpectralField ga = gradient(s.a);
        ga *= cplx(cfg.params.eps, 0.0);
        auto blocks = stacked_block_norms({&s.a, &ga, &s.m}, d, cfg.solver.p,
                                          NormFlavor::fourier_besov);
        return aggregate_blocks(blocks, d.j_min(), 3.0 / cfg.solver.p - 1.0, 1.0) +
               aggregate_blocks(blocks, d.j_min(), 3.0 / cfg.solver.p - 3.0, 1.0);
    };
    double rel = traj_norm(diff) / std::max(traj_norm(pic), 1e-300);
    w.note("cross_scheme_rel = " + fmt(rel));
    w.check("cross_scheme_agreement", rel <= cfg.thresholds.at("picard_cross_rel"), rel,
            cfg.thresholds.at("picard_cross_rel"));
    return w.finish();
}

// ------------------------------------------------------------ phase diagram

ExperimentOutcome run_phase_diagram(const ExperimentConfig& cfg) {
    ResultWriter w(cfg);
    w.csv_header("omega,eps,status,t_reached,e_p_final,e_p0,midband_max");
    GridSpec grid = GridSpec::cube(cfg.grid_n, cfg.l_over_2pi);
    TransformEngine engine(grid);
    DyadicDecomposition d = DyadicDecomposition::standard(grid);
    std::map<int, double> amps;
    for (int j = d.j_min(); j <= d.j_max(); ++j) amps[j] = cfg.amplitude;
    FlowState data = random_flow_state(grid, d, amps, 3.0 / cfg.solver.p - 1.0, cfg.solver.p,
                                       cfg.seed);
    std::vector<std::string> plot_rows;
    for (double om : cfg.sweep_omega)
        for (double ep : cfg.sweep_eps) {
            PhysParams p = cfg.params;
            p.omega = om;
            p.eps = ep;
            RunOutcome out = global_run(data, p, cfg.solver, engine);
            w.csv_row(fmt(om) + "," + fmt(ep) + "," + to_string(out.status) + "," +
                      fmt(out.t_reached) + "," + fmt(out.e_p_final) + "," + fmt(out.e_p0) + "," +
                      fmt(out.midband_max));
            plot_rows.push_back(fmt(om) + " " + fmt(ep) + " " +
                                std::to_string(int(out.status)));
        }
    w.plot_file("plot_phase.dat", "# omega eps status_code", plot_rows);
    return w.finish();
}

// -------------------------------------------------------------- single run

ExperimentOutcome run_single(const ExperimentConfig& cfg) {
    ResultWriter w(cfg);
    w.csv_header("t,e_p,d_low,d_high,d_grad,eps_a_inf,min_density,midband");
    GridSpec grid = GridSpec::cube(cfg.grid_n, cfg.l_over_2pi);
    TransformEngine engine(grid);
    DyadicDecomposition d = DyadicDecomposition::standard(grid);
    std::map<int, double> amps;
    for (int j = d.j_min(); j <= d.j_max(); ++j) amps[j] = cfg.amplitude;
    FlowState data = random_flow_state(grid, d, amps, 3.0 / cfg.solver.p - 1.0, cfg.solver.p,
                                       cfg.seed);
    std::vector<FlowState> snaps;
    RunOutcome out = global_run(data, cfg.params, cfg.solver, engine, &snaps,
                                std::max(1, int(std::lround(cfg.solver.horizon / cfg.solver.h / 4))));
    for (const TrackerRow& row : out.history)
        w.csv_row(fmt(row.t) + "," + fmt(row.e_p) + "," + fmt(row.d_low) + "," + fmt(row.d_high) +
                  "," + fmt(row.d_grad) + "," + fmt(row.eps_a_inf) + "," + fmt(row.min_density) +
                  "," + fmt(row.midband));
    w.note(std::string("status = ") + to_string(out.status));
    w.note("t_reached = " + fmt(out.t_reached));
    w.note("mass_drift = " + fmt(out.mass_drift));
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        write_field_binary(snaps[i].a,
                           (fs::path(w.dir()) / ("snap_a_" + std::to_string(i) + ".bin")).string());
        write_field_binary(snaps[i].m,
                           (fs::path(w.dir()) / ("snap_m_" + std::to_string(i) + ".bin")).string());
    }
    return w.finish();
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::linear_decay: return run_linear_decay(cfg);
        case ExperimentKind::energy_exponents: return run_energy_exponents(cfg);
        case ExperimentKind::strichartz: return run_strichartz(cfg);
        case ExperimentKind::estimate_constants: return run_estimate_constants(cfg);
        case ExperimentKind::picard: return run_picard(cfg);
        case ExperimentKind::phase_diagram: return run_phase_diagram(cfg);
        case ExperimentKind::single_run: return run_single(cfg);
    }
    throw std::logic_error("run_experiment: unknown kind");
}

int report_results(const std::string& result_dir) {
    std::ifstream sum(fs::path(result_dir) / "summary.txt");
    if (!sum) {
        std::cerr << "no summary.txt under " << result_dir << "\n";
        return 1;
    }
    std::cout << sum.rdbuf();
    return 0;
}

}  // namespace nskr
