// The ten acceptance checks. Each prints one [PASS]/[FAIL] line; thresholds are
// pinned here and mirrored by the experiment configs' documented defaults.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <vector>

#include "conv_oracle.hpp"
#include "nskr/bony.hpp"
#include "nskr/estimates.hpp"
#include "nskr/fields_io.hpp"
#include "nskr/run.hpp"

using namespace nskr;

namespace {

int report(int k, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", k, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    return pass ? 0 : 1;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ----------------------------------------------------------------- 1
int criterion_inviscid_conservation() {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.1, 4.0);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
        PhysParams p(1.0, 1.0, 1.0, 0.05 + unif(rng) / 8.0, 8.0 * unif(rng));
        Xi xi{gauss(rng), gauss(rng), gauss(rng)};
        ModeMatrix m = assemble_mode_matrix(xi, p, false);
        Vec4 u0;
        for (int q = 0; q < 4; ++q) u0(q) = cplx(gauss(rng), gauss(rng));
        double n0 = u0.norm();
        for (double t : {1.0, 2.5, 5.0, 7.5, 10.0}) {
            Vec4 u = mode_exponential(m, t) * u0;
            worst = std::max(worst, std::abs(u.norm() - n0) / n0);
        }
    }
    return report(1, worst <= 1e-10, "inviscid per-mode norm conservation on [0,10]",
                  "max relative drift " + fmt(worst) + " <= 1e-10, 1000 modes");
}

// ----------------------------------------------------------------- 2
int criterion_lyapunov_equivalence() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> box(0.25, 4.0);
    std::normal_distribution<double> gauss;
    int violations = 0;
    double lo = 2.0, hi = 0.0;
    for (int s = 0; s < 10000; ++s) {
        PhysParams p(box(rng), box(rng), box(rng), 0.02 + box(rng) / 4.0, 16.0 * (box(rng) - 0.25));
        Xi xi{2.0 * gauss(rng), 2.0 * gauss(rng), 2.0 * gauss(rng)};
        Vec4 u;
        for (int q = 0; q < 4; ++q) u(q) = cplx(gauss(rng), gauss(rng));
        LyapunovReport rep = lyapunov_value(xi, u, p);
        lo = std::min(lo, rep.ratio);
        hi = std::max(hi, rep.ratio);
        if (!(rep.ratio >= 0.5 - 1e-12 && rep.ratio <= 1.5 + 1e-12)) ++violations;
    }
    return report(2, violations == 0, "Lyapunov ratio in [1/2, 3/2] over 10^4 samples",
                  "range [" + fmt(lo) + ", " + fmt(hi) + "], violations " +
                      std::to_string(violations));
}

// ----------------------------------------------------------------- 3
int criterion_abscissa_bound() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> dir(-1.0, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    int checked = 0;
    const double omegas[5] = {1.0, 4.0, 16.0, 64.0, 256.0};
    const double epss[5] = {0.25, 1.0 / 16, 1.0 / 64, 1.0 / 256, 1.0 / 1024};
    for (int e = -3; e <= 3; ++e)
        for (double om : omegas)
            for (double ep : epss) {
                if (om * ep > 1.0) continue;
                PhysParams p(1.0, 1.0, 1.0, ep, om);
                double radius = std::ldexp(1.0, e);
                double v[3] = {dir(rng), dir(rng), dir(rng)};
                double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
                Xi xi{radius * v[0] / n, radius * v[1] / n, radius * v[2] / n};
                DecayCheckRow row = check_mode_decay(xi, p);
                worst = std::min(worst, row.margin);
                ++checked;
            }
    return report(3, worst >= -1e-9, "spectral abscissa below -(eta/3) Theta",
                  "min margin " + fmt(worst) + " over " + std::to_string(checked) + " samples");
}

// ----------------------------------------------------------------- 4
int criterion_energy_exponents() {
    // |Omega| eps = 1 with the capillary scale well above the top block, so the
    // low band sits at |xi| << Omega eps and the high band at Omega eps < |xi| << 1/eps
    PhysParams p(1.0, 1.0, 1.0, 1.0 / 256.0, 256.0);
    bool ok = true;
    std::string detail;
    for (double r : {1.0, 2.0}) {
        EnergyFitResult low = verify_energy_estimate(p, r, {-6, -5, -4, -3, -2}, true);
        EnergyFitResult high = verify_energy_estimate(p, r, {1, 2, 3, 4, 5}, false);
        bool okl = std::abs(low.slope - (-4.0 / r)) <= 0.15;
        bool okh = std::abs(high.slope - (-2.0 / r)) <= 0.15;
        ok = ok && okl && okh;
        detail += "r=" + fmt(r) + ": low " + fmt(low.slope) + " (want " + fmt(-4.0 / r) +
                  "), high " + fmt(high.slope) + " (want " + fmt(-2.0 / r) + "); ";
    }
    return report(4, ok, "low/high band time-L^r smoothing exponents within 0.15", detail);
}

// ----------------------------------------------------------------- 5
int criterion_strichartz_slope() {
    GridSpec grid = GridSpec::cube(64, 2.0);
    TransformEngine engine(grid);
    DyadicDecomposition d = DyadicDecomposition::standard(grid);
    FlowState datum = strichartz_packet(grid, d.j_max() - 1, d.j_max(), 1.0, 909);
    PhysParams base(1.0, 1.0, 1.0, std::ldexp(1.0, -11), 0.0);
    std::vector<double> omegas = {16, 32, 64, 128, 256, 512};
    StrichartzResult res =
        measure_strichartz(datum, base, omegas, 6.0, 3.0, 8.0, 64, engine);
    double target = -1.0 / 3.0 + 0.1;
    return report(5, res.slope <= target, "Strichartz Omega-slope at (p,q,r) = (2,6,3)",
                  "fitted slope " + fmt(res.slope) + " <= " + fmt(target) + ", residual " +
                      fmt(res.fit_residual));
}

// ----------------------------------------------------------------- 6
int criterion_bony_and_partition() {
    GridSpec g = GridSpec::cube(32, 2.0);
    TransformEngine engine(g);
    DyadicDecomposition d = DyadicDecomposition::standard(g);
    std::mt19937_64 rng(66);
    double worst_resid = 0.0;
    for (int s = 0; s < 50; ++s) {
        SpectralField f = continuum_random_field(g, d.coverage_inner() * 2.0,
                                                 d.coverage_outer() / 2.0, 660 + s);
        SpectralField h = continuum_random_field(g, d.coverage_inner() * 2.0,
                                                 d.coverage_outer() / 2.0, 990 + s);
        SpectralField fg = dealias_product(f, h, engine);
        SpectralField sum = bony_paraproduct(f, h, d, engine);
        sum += bony_paraproduct(h, f, d, engine);
        sum += bony_remainder(f, h, d, engine);
        sum -= fg;
        double num = 0.0, den = 0.0;
        for (const cplx& v : sum.comp(0)) num = std::max(num, std::abs(v));
        for (const cplx& v : fg.comp(0)) den = std::max(den, std::abs(v));
        worst_resid = std::max(worst_resid, num / std::max(den, 1e-300));
    }
    // partition-of-unity defect on the resolved annulus of a larger grid
    GridSpec g64 = GridSpec::cube(64, 2.0);
    DyadicDecomposition d64 = DyadicDecomposition::standard(g64);
    double defect = 0.0;
    for (std::size_t i = 0; i < g64.size(); ++i) {
        double r = d64.radius(i);
        if (r < d64.coverage_inner() || r > d64.coverage_outer()) continue;
        double sum = 0.0;
        for (int j = d64.j_min(); j <= d64.j_max(); ++j) sum += d64.mask(j, i);
        defect = std::max(defect, std::abs(sum - 1.0));
    }
    bool ok = worst_resid <= 1e-10 && defect <= 1e-12;
    return report(6, ok, "Bony identity and partition of unity",
                  "worst residual " + fmt(worst_resid) + " <= 1e-10 over 50 pairs, defect " +
                      fmt(defect) + " <= 1e-12");
}

// ----------------------------------------------------------------- 7
int criterion_estimate_constants() {
    bool ok = true;
    std::string detail;
    const int n_samples = 100;
    for (int which = 0; which < 4; ++which) {
        const char* names[4] = {"product_fb", "product_besov", "product_mixed", "composition"};
        double mean[2] = {0.0, 0.0};
        double worst_homog = 0.0;
        bool finite = true;
        for (int pass = 0; pass < 2; ++pass) {
            GridSpec grid = GridSpec::cube(pass == 0 ? 32 : 64, 2.0);
            TransformEngine engine(grid);
            DyadicDecomposition d = DyadicDecomposition::standard(grid);
            double inner = d.coverage_inner() * 2.0, outer = d.coverage_outer() / 4.0;
            double acc = 0.0;
            int counted = 0;
            for (int s = 0; s < n_samples; ++s) {
                unsigned seed = 7000 + 977 * s + which * 131071;
                SpectralField f = continuum_random_field(grid, inner, outer, seed);
                SpectralField g = continuum_random_field(grid, inner, outer, seed + 31);
                auto eval = [&](const SpectralField& fa, const SpectralField& ga) {
                    switch (which) {
                        case 0:
                            return measure_product_fourier_besov(fa, ga, d, FourierProductCase{2.0, 1.0, 0.0, 1.0},
                                                           engine)
                                .ratio;
                        case 1:
                            return measure_product_besov(fa, ga, d, BesovProductCase{3.0, 1.0, 0.5, 0.5},
                                                           engine)
                                .ratio;
                        case 2:
                            return measure_product_mixed(
                                       fa, ga, d,
                                       MixedProductCase{2.0, 3.0, 0.5, 0.5, 1.0, d.coverage_outer() / 4.0,
                                                   true},
                                       engine)
                                .ratio;
                        default: {
                            SpectralField u = fa;
                            double n = fourier_besov_norm(u, d, 1.5, 2.0, 1.0);
                            u *= cplx(0.05 / std::max(n, 1e-300), 0.0);
                            return compose_analytic([](double b) { return b / (1.0 + b); }, u, 0.5,
                                                    2.0, d, engine)
                                .norm_ratio;
                        }
                    }
                };
                double ratio = eval(f, g);
                finite = finite && std::isfinite(ratio) && ratio >= 0.0;
                acc += ratio;
                ++counted;
                // bilinear ratios are amplitude-homogeneous; check on a subsample
                if (which < 3 && pass == 0 && s % 10 == 0) {
                    SpectralField cf = f, cg = g;
                    cf *= cplx(13.7, 0.0);
                    cg *= cplx(0.003, 0.0);
                    double r2 = eval(cf, cg);
                    worst_homog = std::max(
                        worst_homog, std::abs(r2 - ratio) / std::max(std::abs(ratio), 1e-300));
                }
            }
            mean[pass] = acc / counted;
        }
        double drift = mean[1] / std::max(mean[0], 1e-300);
        if (drift < 1.0) drift = 1.0 / drift;
        bool case_ok = finite && drift <= 2.0 && (which == 3 || worst_homog <= 1e-10);
        ok = ok && case_ok;
        detail += std::string(names[which]) + ": drift " + fmt(drift) + ", homog " +
                  fmt(worst_homog) + "; ";
    }
    return report(7, ok, "empirical constants finite, homogeneous, refinement-stable", detail);
}

// ----------------------------------------------------------------- 8
int criterion_picard() {
    GridSpec g = GridSpec::cube(16, 2.0);
    TransformEngine engine(g);
    PhysParams p(1.0, 1.0, 1.0, 0.5, 1.0, PressureLaw(2.0));
    DyadicDecomposition d = DyadicDecomposition::standard(g);
    SolverConfig cfg;
    cfg.density_floor = 0.0;
    cfg.picard_tol = 1e-12;
    cfg.picard_ball = 20.0;
    std::map<int, double> amps{{d.j_max() - 1, 1.0}, {d.j_max(), 1.0}};
    FlowState s0 = random_flow_state(g, d, amps, 3.0 / cfg.p - 1.0, cfg.p, 808);
    const double t_end = 0.1;
    PicardResult res = picard_local_solve(s0, t_end, p, cfg, engine, 200);

    bool contracting = !res.ratios.empty() && res.ball_ok;
    for (double r : res.ratios) contracting = contracting && r < 1.0;
    bool decreasing = res.ratios.size() >= 2;
    for (std::size_t k = 2; k < res.ratios.size(); ++k)
        decreasing = decreasing && res.ratios[k] <= res.ratios[k - 1] * 1.001;

    // ETD2 at h = 1e-3 on the same window, compared in E_p of the difference
    SolverConfig etd_cfg = cfg;
    etd_cfg.h = 1e-3;
    PropagatorCache cache(g, p, etd_cfg.h);
    std::vector<FlowState> etraj{s0};
    FlowState s = s0;
    for (int k = 0; k < 100; ++k) {
        s = etd_step(s, cache, engine, etd_cfg);
        etraj.push_back(s);
    }
    std::vector<FlowState> ptraj, dtraj;
    for (int k = 0; k <= 100; ++k) {
        ptraj.push_back(res.trajectory[2 * k]);  // picard fine grid is 2x finer
        FlowState diff = etraj[k];
        diff.a -= ptraj.back().a;
        diff.m -= ptraj.back().m;
        diff.time = etraj[k].time;
        dtraj.push_back(std::move(diff));
    }
    double e_ref = track_apriori(ptraj, p, cfg, engine).e_p();
    double e_diff = track_apriori(dtraj, p, cfg, engine).e_p();
    double rel = e_diff / std::max(e_ref, 1e-300);

    bool ok = contracting && decreasing && res.status == RunStatus::bounded && rel <= 1e-6;
    std::string ratio_str;
    for (double r : res.ratios) ratio_str += fmt(r) + " ";
    return report(8, ok, "Picard contraction and ETD2 agreement",
                  "ratios [ " + ratio_str + "], cross-scheme E_p rel " + fmt(rel) + " <= 1e-6");
}

// ----------------------------------------------------------------- 9
int criterion_nonlinearity_oracle() {
    GridSpec g = GridSpec::cube(16, 2.0);
    TransformEngine engine(g);
    PhysParams p(1.0, 0.5, 1.25, 0.5, 2.0, PressureLaw(2.0));
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss;
    FlowState s(g);
    for (int k0 = -2; k0 <= 2; ++k0)
        for (int k1 = -2; k1 <= 2; ++k1)
            for (int k2 = 0; k2 <= 2; ++k2) {
                if (k0 == 0 && k1 == 0 && k2 == 0) continue;
                std::size_t i = g.flat(g.unwrap(k0), g.unwrap(k1), g.unwrap(k2));
                std::size_t ci = g.conj_index(i);
                cplx va(0.1 * gauss(rng), 0.1 * gauss(rng));
                s.a.at(0, i) = va;
                s.a.at(0, ci) = std::conj(va);
                for (int c = 0; c < 3; ++c) {
                    cplx vm(0.08 * gauss(rng), 0.08 * gauss(rng));
                    s.m.at(c, i) = vm;
                    s.m.at(c, ci) = std::conj(vm);
                }
            }
    NonlinearityTerms impl =
        eval_nonlinearity_terms(s, p, engine, NonlinearityVariant::quadratic_freeze);
    NonlinearityTerms oracle = test::oracle_terms(s, p);
    double worst = 0.0;
    for (int k = 0; k < NonlinearityTerms::count; ++k) {
        double num = 0.0, den = 0.0;
        for (int c = 0; c < 3; ++c) {
            auto a = impl.term(k).comp(c);
            auto b = oracle.term(k).comp(c);
            for (std::size_t i = 0; i < a.size(); ++i) {
                num = std::max(num, std::abs(a[i] - b[i]));
                den = std::max(den, std::abs(b[i]));
            }
        }
        worst = std::max(worst, num / std::max(den, 1e-300));
    }
    // zero mean per term, both variants
    double mean_defect = 0.0;
    for (auto variant : {NonlinearityVariant::full, NonlinearityVariant::quadratic_freeze}) {
        NonlinearityTerms t = eval_nonlinearity_terms(s, p, engine, variant);
        double scale = 0.0;
        for (int k = 0; k < NonlinearityTerms::count; ++k)
            for (int c = 0; c < 3; ++c)
                for (const cplx& v : t.term(k).comp(c)) scale = std::max(scale, std::abs(v));
        for (int k = 0; k < NonlinearityTerms::count; ++k)
            for (int c = 0; c < 3; ++c)
                mean_defect = std::max(mean_defect, std::abs(t.term(k).at(c, 0)) / scale);
    }
    bool ok = worst <= 1e-12 && mean_defect <= 1e-12;
    return report(9, ok, "nonlinearity matches the convolution-sum oracle term-by-term",
                  "worst term mismatch " + fmt(worst) + ", zero-mean defect " + fmt(mean_defect));
}

// ----------------------------------------------------------------- 10
int criterion_rotation_stabilization() {
    GridSpec g = GridSpec::cube(64, 16.0);
    TransformEngine engine(g);
    DyadicDecomposition d = DyadicDecomposition::standard(g);

    // large datum confined to the two lowest blocks with momentum-dominant
    // content: the mid band starts empty, so its tracker maximum measures the
    // nonlinear transfer that rotation is expected to suppress
    SolverConfig cfg;
    cfg.density_floor = 0.2;
    std::map<int, double> amp_a, amp_m;
    for (int j : {-3, -2}) {
        amp_a[j] = 960.0;
        amp_m[j] = 2880.0;
    }
    FlowState data(g);
    data.a = random_band_field(g, d, amp_a, 3.0 / cfg.p - 1.0, cfg.p, 1010, FieldRank::scalar);
    data.m = random_band_field(g, d, amp_m, 3.0 / cfg.p - 1.0, cfg.p, 1011, FieldRank::vector3);

    // sign test: |Omega| eps = 1/4 fixed, Omega over 3 octaves, phase-resolving steps
    std::vector<double> mids;
    std::string mid_str;
    bool monotone = true;
    for (double om : {8.0, 16.0, 32.0, 64.0}) {
        PhysParams p(0.25, 0.25, 0.25, 0.25 / om, om, PressureLaw(2.0));
        SolverConfig run_cfg = cfg;
        run_cfg.h = 0.1 / om;
        run_cfg.horizon = 1.5;
        run_cfg.sample_stride = std::max(1, int(std::lround(0.025 / run_cfg.h)));
        RunOutcome out = global_run(data, p, run_cfg, engine);
        mids.push_back(out.midband_max);
        mid_str += fmt(out.midband_max) + " ";
        if (mids.size() > 1 && mids.back() > mids[mids.size() - 2] * 1.02) monotone = false;
    }

    // contrast fixtures: statuses recorded from the reference runs
    // (no rotation at eps = 1 compresses the density through the floor by t ~ 0.7;
    //  the same datum at Omega = 256, eps = 2^-10 stays bounded through T = 10)
    PhysParams norot(0.25, 0.25, 0.25, 1.0, 0.0, PressureLaw(2.0));
    SolverConfig fx_cfg = cfg;
    fx_cfg.h = 0.025;
    fx_cfg.horizon = 10.0;
    fx_cfg.sample_stride = 16;
    RunOutcome out_norot = global_run(data, norot, fx_cfg, engine);
    PhysParams rot(0.25, 0.25, 0.25, 1.0 / 1024.0, 256.0, PressureLaw(2.0));
    fx_cfg.h = 0.05;
    fx_cfg.sample_stride = 8;
    RunOutcome out_rot = global_run(data, rot, fx_cfg, engine);
    bool fixtures = out_rot.status == RunStatus::bounded &&
                    (out_norot.status == RunStatus::norm_growth ||
                     out_norot.status == RunStatus::inadmissible_density);

    bool ok = monotone && fixtures;
    return report(10, ok, "rotation stabilization: mid-band monotone and contrast fixtures",
                  "midband maxima [ " + mid_str + "], fixtures " +
                      std::string(to_string(out_rot.status)) + "/" +
                      std::string(to_string(out_norot.status)));
}

}  // namespace

int run_criterion(int k) {
    switch (k) {
        case 1: return criterion_inviscid_conservation();
        case 2: return criterion_lyapunov_equivalence();
        case 3: return criterion_abscissa_bound();
        case 4: return criterion_energy_exponents();
        case 5: return criterion_strichartz_slope();
        case 6: return criterion_bony_and_partition();
        case 7: return criterion_estimate_constants();
        case 8: return criterion_picard();
        case 9: return criterion_nonlinearity_oracle();
        case 10: return criterion_rotation_stabilization();
    }
    return 2;
}
