#ifndef NSKR_TRANSFORM_HPP
#define NSKR_TRANSFORM_HPP

#include <memory>
#include <span>
#include <vector>

#include "nskr/field.hpp"
#include "nskr/grid.hpp"

namespace nskr {

// FFTW-backed discrete realization of the continuum transform pair:
//   forward  F[f](xi)  ~ (L/N)^3 * sum_x e^{-i x.xi} f(x)
//   inverse  Finv[g](x) ~ (1/L^3) * sum_k e^{+i x.xi_k} g(xi_k)
// Keeps a scratch buffer and plans; one engine per worker, not re-entrant.
class TransformEngine {
  public:
    explicit TransformEngine(const GridSpec& grid);
    ~TransformEngine();
    TransformEngine(const TransformEngine&) = delete;
    TransformEngine& operator=(const TransformEngine&) = delete;

    const GridSpec& grid() const { return grid_; }

    void forward(std::span<const double> phys, std::span<cplx> coeffs) const;
    // Throws if the imaginary residue exceeds imag_tol relative to the field amplitude.
    void inverse(std::span<const cplx> coeffs, std::span<double> phys,
                 double imag_tol = 1e-10) const;

    SpectralField forward_field(const std::vector<double>& phys, FieldRank rank) const;
    std::vector<double> inverse_field(const SpectralField& f, double imag_tol = 1e-10) const;

  private:
    GridSpec grid_;
    mutable std::vector<cplx> scratch_;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
};

// Spectral derivative helpers (pointwise i*xi multipliers).
SpectralField gradient(const SpectralField& scalar);
SpectralField divergence(const SpectralField& vec);
SpectralField laplacian(const SpectralField& f);

}  // namespace nskr

#endif
