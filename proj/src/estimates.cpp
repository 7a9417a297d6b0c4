#include <cmath>
#include <stdexcept>

#include "nskr/estimates.hpp"

namespace nskr {

SpectralField riesz_power(const SpectralField& f, double k) {
    const GridSpec& g = f.grid();
    SpectralField out(g, f.rank());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g.xi_norm(i);
        double m = r == 0.0 ? 0.0 : std::pow(r, k);
        for (int c = 0; c < f.ncomp(); ++c) out.at(c, i) = m * f.at(c, i);
    }
    return out;
}

BernsteinReport verify_bernstein(const SpectralField& f, const DyadicDecomposition& d, int j,
                                 int k, double p, double q) {
    d.check_block(j);
    if (!(q >= p)) throw std::invalid_argument("verify_bernstein: requires q >= p");
    double leak = 0.0, total = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) {
        auto v = f.comp(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            double a = std::abs(v[i]);
            total += a;
            if (d.mask(j, i) == 0.0) leak += a;
        }
    }
    if (total == 0.0) throw std::invalid_argument("verify_bernstein: zero field");
    if (leak > 1e-12 * total)
        throw std::runtime_error("verify_bernstein: support leaks outside block " + std::to_string(j));

    SpectralField df = riesz_power(f, k);
    const double np = fourier_lebesgue_norm(f, p);
    const double nq = fourier_lebesgue_norm(df, q);
    const double npk = fourier_lebesgue_norm(df, p);
    const double lam = std::ldexp(1.0, j);

    BernsteinReport rep;
    rep.ratio = nq / (std::pow(lam, k + 3.0 * (1.0 / p - 1.0 / q)) * np);
    rep.reverse_ratio = np / (std::pow(lam, -double(k)) * npk);
    const double annulus_vol = (4.0 * M_PI / 3.0) * (std::pow(8.0 / 3.0, 3) - 1.0);
    rep.c_grid = std::pow(8.0 / 3.0, k) * std::pow(annulus_vol, 1.0 / p - 1.0 / q);
    return rep;
}

void FourierProductCase::validate() const {
    if (!(p >= 1.0)) throw std::invalid_argument("fourier-besov product: p must lie in [1, inf]");
    if (!(s < std::min(3.0, 6.0 / p)))
        throw std::invalid_argument("fourier-besov product: hypothesis s < min{3, 6/p} violated");
    if (!(s1 >= 0.0)) throw std::invalid_argument("fourier-besov product: hypothesis s1 >= 0 violated");
    if (!(s3 >= 0.0)) throw std::invalid_argument("fourier-besov product: hypothesis s3 >= 0 violated");
}

void BesovProductCase::validate() const {
    if (!(q >= 2.0 && q <= 4.0)) throw std::invalid_argument("besov product: requires 2 <= q <= 4");
    if (!(s < 6.0 / q)) throw std::invalid_argument("besov product: hypothesis s < 6/q violated");
    if (!(std::min(s1, s3) >= 1.5 - 3.0 / q))
        throw std::invalid_argument("besov product: hypothesis min{s1,s3} >= 3/2 - 3/q violated");
}

void MixedProductCase::validate() const {
    if (!(p >= 2.0)) throw std::invalid_argument("mixed product: requires p >= 2");
    if (!(q >= 2.0 && q <= 4.0)) throw std::invalid_argument("mixed product: requires 2 <= q <= 4");
    if (!(s > -6.0 / q)) throw std::invalid_argument("mixed product: hypothesis s > -6/q violated");
    if (!(s1 >= 0.0)) throw std::invalid_argument("mixed product: hypothesis s1 >= 0 violated");
    if (!(s2 >= 1.5 - 3.0 / q))
        throw std::invalid_argument("mixed product: hypothesis s2 >= 3/2 - 3/q violated");
    if (!(beta > 0.0)) throw std::invalid_argument("mixed product: beta must be positive");
}

namespace {

ProductReport finish(double lhs, double r1, double r2) {
    ProductReport rep;
    rep.lhs = lhs;
    rep.rhs_term1 = r1;
    rep.rhs_term2 = r2;
    double denom = r1 + r2;
    rep.ratio = denom > 0.0 ? lhs / denom : (lhs == 0.0 ? 0.0 : p_inf);
    return rep;
}

}  // namespace

ProductReport measure_product_fourier_besov(const SpectralField& f, const SpectralField& g,
                                      const DyadicDecomposition& d, const FourierProductCase& c,
                                      const TransformEngine& engine) {
    c.validate();
    SpectralField fg = dealias_product(f, g, engine);
    double lhs = fourier_besov_norm(fg, d, 3.0 / c.p - c.s, c.p, 1.0);
    double r1 = fourier_besov_norm(f, d, 3.0 / c.p - c.s1, c.p, 1.0) *
                fourier_besov_norm(g, d, 3.0 / c.p - c.s2(), c.p, 1.0);
    double r2 = fourier_besov_norm(g, d, 3.0 / c.p - c.s3, c.p, 1.0) *
                fourier_besov_norm(f, d, 3.0 / c.p - c.s4(), c.p, 1.0);
    return finish(lhs, r1, r2);
}

ProductReport measure_product_besov(const SpectralField& f, const SpectralField& g,
                                      const DyadicDecomposition& d, const BesovProductCase& c,
                                      const TransformEngine& engine) {
    c.validate();
    SpectralField fg = dealias_product(f, g, engine);
    double lhs = besov_norm(fg, d, NormSpec{1.5 - c.s, 2.0, 1.0, NormFlavor::besov}, &engine);
    double r1 = besov_norm(f, d, NormSpec{3.0 / c.q - c.s1, c.q, 1.0, NormFlavor::besov}, &engine) *
                besov_norm(g, d, NormSpec{3.0 / c.q - c.s2(), c.q, 1.0, NormFlavor::besov}, &engine);
    double r2 = besov_norm(g, d, NormSpec{3.0 / c.q - c.s3, c.q, 1.0, NormFlavor::besov}, &engine) *
                besov_norm(f, d, NormSpec{3.0 / c.q - c.s4(), c.q, 1.0, NormFlavor::besov}, &engine);
    return finish(lhs, r1, r2);
}

ProductReport measure_product_mixed(const SpectralField& f, const SpectralField& g,
                                      const DyadicDecomposition& d, const MixedProductCase& c,
                                      const TransformEngine& engine) {
    c.validate();
    SpectralField fg = dealias_product(f, g, engine);
    NormSpec lhs_spec{3.0 / c.p + c.s, c.p, 1.0, NormFlavor::fourier_besov};
    double lhs = c.truncated
                     ? truncated_norm(fg, d, lhs_spec, TruncationBand::high(c.beta))
                     : besov_norm(fg, d, lhs_spec);
    double gf = c.truncated
                    ? truncated_norm(g, d,
                                     NormSpec{3.0 / c.p + c.s + c.s1, c.p, 1.0,
                                              NormFlavor::fourier_besov},
                                     TruncationBand::high(c.beta / 16.0))
                    : fourier_besov_norm(g, d, 3.0 / c.p + c.s + c.s1, c.p, 1.0);
    double r1 = fourier_besov_norm(f, d, 3.0 / c.p - c.s1, c.p, 1.0) * gf;
    double r2 = besov_norm(g, d, NormSpec{3.0 / c.q - c.s2, c.q, 1.0, NormFlavor::besov}, &engine) *
                besov_norm(f, d, NormSpec{3.0 / c.q + c.s + c.s2, c.q, 1.0, NormFlavor::besov},
                           &engine);
    return finish(lhs, r1, r2);
}

CompositionReport compose_analytic(const std::function<double(double)>& F, const SpectralField& u,
                                   double s, double p, const DyadicDecomposition& d,
                                   const TransformEngine& engine, double smallness) {
    if (u.ncomp() != 1) throw std::invalid_argument("compose_analytic expects a scalar field");
    if (std::abs(F(0.0)) > 1e-14) throw std::invalid_argument("compose_analytic: F(0) must vanish");
    const double pp = holder_conjugate(p);
    if (!(s > -std::min(3.0 / p, 3.0 / pp) && s <= 3.0 / p))
        throw std::invalid_argument(
            "compose_analytic: hypothesis -min{3/p, 3/p'} < s <= 3/p violated");
    const std::size_t n = u.grid().size();
    std::vector<double> phys(n);
    engine.inverse(u.comp(0), phys);
    for (auto& v : phys) v = F(v);
    CompositionReport rep{SpectralField(u.grid(), FieldRank::scalar), 0.0, 0.0, true};
    engine.forward(phys, rep.result.comp(0));
    dealias_truncate(rep.result);
    rep.input_norm = fourier_besov_norm(u, d, 3.0 / p, p, 1.0);
    rep.smallness_ok = rep.input_norm <= smallness;
    double nu = fourier_besov_norm(u, d, s, p, 1.0);
    double nf = fourier_besov_norm(rep.result, d, s, p, 1.0);
    rep.norm_ratio = nu > 0.0 ? nf / nu : 0.0;
    return rep;
}

}  // namespace nskr
