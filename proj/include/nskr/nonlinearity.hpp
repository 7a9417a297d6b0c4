#ifndef NSKR_NONLINEARITY_HPP
#define NSKR_NONLINEARITY_HPP

#include "nskr/field.hpp"
#include "nskr/params.hpp"
#include "nskr/transform.hpp"

namespace nskr {

// quadratic_freeze replaces I(b) -> b and J(b) -> J'(0) b, turning every term
// polynomial; that variant is what the convolution-sum oracle can reproduce exactly.
enum class NonlinearityVariant { full, quadratic_freeze };

struct DensityFloorViolation : std::runtime_error {
    double min_density;
    explicit DensityFloorViolation(double d)
        : std::runtime_error("density floor violated: min(1 + eps a) = " + std::to_string(d)),
          min_density(d) {}
};

// The seven terms of N_eps[a,m], each a vector3 forcing field:
//   convection    div((I(eps a) - 1) m (x) m)
//   visc_laplace  -mu Lap(I(eps a) m)
//   visc_graddiv  -(mu+lambda) grad div(I(eps a) m)
//   pressure      -(1/eps) J(eps a) grad a         (conservative form -(1/eps^2) grad G(eps a))
//   cap_a_lap     kappa eps^2 grad(a Lap a)
//   cap_grad_sq   (kappa eps^2 / 2) grad(|grad a|^2)
//   cap_tensor    -kappa eps^2 div(grad a (x) grad a)
struct NonlinearityTerms {
    SpectralField convection, visc_laplace, visc_graddiv, pressure;
    SpectralField cap_a_lap, cap_grad_sq, cap_tensor;

    SpectralField total() const;
    const SpectralField& term(int k) const;
    static const char* term_name(int k);
    static constexpr int count = 7;
};

// Per-term assembly (tests, small grids). Products in physical space, spectral
// derivatives, one 2/3-rule truncation per term.
NonlinearityTerms eval_nonlinearity_terms(const FlowState& state, const PhysParams& params,
                                          const TransformEngine& engine,
                                          NonlinearityVariant variant = NonlinearityVariant::full,
                                          double density_floor = 0.0);

// Memory-lean total N_eps[a,m] for the time stepper.
SpectralField eval_nonlinearity(const FlowState& state, const PhysParams& params,
                                const TransformEngine& engine,
                                NonlinearityVariant variant = NonlinearityVariant::full,
                                double density_floor = 0.0);

// min over collocation points of 1 + eps*a and max |eps*a|.
struct AdmissibilityScan {
    double min_density = 0.0;
    double max_eps_a = 0.0;
};
AdmissibilityScan scan_admissibility(const FlowState& state, const PhysParams& params,
                                     const TransformEngine& engine);

}  // namespace nskr

#endif
