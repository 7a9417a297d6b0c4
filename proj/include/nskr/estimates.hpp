#ifndef NSKR_ESTIMATES_HPP
#define NSKR_ESTIMATES_HPP

#include <functional>

#include "nskr/norms.hpp"

namespace nskr {

// |xi|^k Fourier multiplier; the k-th derivative magnitude used by the
// block-estimate verifiers (exact on single modes, unlike the componentwise gradient).
SpectralField riesz_power(const SpectralField& f, double k);

struct BernsteinReport {
    double ratio = 0.0;          // ||grad^k f||_{L^q_hat} / (2^{j(k+3(1/p-1/q))} ||f||_{L^p_hat})
    double reverse_ratio = 0.0;  // ||f||_{L^p_hat} / (2^{-jk} ||grad^k f||_{L^p_hat})
    double c_grid = 0.0;         // (8/3)^k * (annulus volume)^{1/p-1/q}
};

// Requires f block-supported at block j (support leakage is an error).
BernsteinReport verify_bernstein(const SpectralField& f, const DyadicDecomposition& d, int j,
                                 int k, double p, double q);

struct ProductReport {
    double lhs = 0.0;
    double rhs_term1 = 0.0;
    double rhs_term2 = 0.0;
    double ratio = 0.0;  // lhs / (rhs_term1 + rhs_term2), with the estimate's constant set to 1
};

// ||fg||_{FB^{3/p-s}_{p,1}} <= C ||f||_{FB^{3/p-s1}} ||g||_{FB^{3/p-s2}} + (f <-> g, s3/s4)
struct FourierProductCase {
    double p = 2.0, s = 1.0, s1 = 0.0, s3 = 0.0;
    double s2() const { return s - s1; }
    double s4() const { return s - s3; }
    void validate() const;
};
ProductReport measure_product_fourier_besov(const SpectralField& f, const SpectralField& g,
                                      const DyadicDecomposition& d, const FourierProductCase& c,
                                      const TransformEngine& engine);

// ||fg||_{B^{3/2-s}_{2,1}} <= C ||f||_{B^{3/q-s1}_{q,1}} ||g||_{B^{3/q-s2}_{q,1}} + (f <-> g)
struct BesovProductCase {
    double q = 2.0, s = 1.0, s1 = 0.0, s3 = 0.0;
    double s2() const { return s - s1; }
    double s4() const { return s - s3; }
    void validate() const;
};
ProductReport measure_product_besov(const SpectralField& f, const SpectralField& g,
                                      const DyadicDecomposition& d, const BesovProductCase& c,
                                      const TransformEngine& engine);

// ||fg||_{FB^{3/p+s}_{p,1}}(^{h;beta}) <= C ||f||_{FB^{3/p-s1}} ||g||_{FB^{3/p+s+s1}}(^{h;beta/16})
//                                        + C ||g||_{B^{3/q-s2}_{q,1}} ||f||_{B^{3/q+s+s2}_{q,1}}
struct MixedProductCase {
    double p = 2.0, q = 2.0, s = 0.0, s1 = 0.0, s2 = 0.0;
    double beta = 1.0;
    bool truncated = false;  // false: product31, true: product32
    void validate() const;
};
ProductReport measure_product_mixed(const SpectralField& f, const SpectralField& g,
                                      const DyadicDecomposition& d, const MixedProductCase& c,
                                      const TransformEngine& engine);

struct CompositionReport {
    SpectralField result;
    double norm_ratio = 0.0;   // ||F(u)||_s / ||u||_s
    double input_norm = 0.0;   // ||u||_{FB^{3/p}_{p,1}}
    bool smallness_ok = true;  // input_norm <= smallness threshold
};

// F analytic at 0 with F(0) = 0, evaluated pointwise in physical space then dealiased.
CompositionReport compose_analytic(const std::function<double(double)>& F, const SpectralField& u,
                                   double s, double p, const DyadicDecomposition& d,
                                   const TransformEngine& engine, double smallness = 0.2);

}  // namespace nskr

#endif
