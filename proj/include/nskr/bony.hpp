#ifndef NSKR_BONY_HPP
#define NSKR_BONY_HPP

#include "nskr/dyadic.hpp"
#include "nskr/field.hpp"
#include "nskr/transform.hpp"

namespace nskr {

// Bony calculus on scalar band-limited fields:
//   T_f g = sum_j S_{j-1} f * Delta_j g,
//   R(f,g) = sum_j sum_{|j'-j|<=1} Delta_j f * Delta_{j'} g,
// with every product evaluated through dealias_product, so
// T_f g + T_g f + R(f,g) = fg holds exactly on resolved inputs.
//
// Inputs must carry their coefficient mass inside the partition coverage;
// otherwise the decomposition silently loses frequencies, so we fail instead.
SpectralField bony_paraproduct(const SpectralField& f, const SpectralField& g,
                               const DyadicDecomposition& d, const TransformEngine& engine);
SpectralField bony_remainder(const SpectralField& f, const SpectralField& g,
                             const DyadicDecomposition& d, const TransformEngine& engine);

void require_resolved(const SpectralField& f, const DyadicDecomposition& d,
                      double tol = 1e-10);

}  // namespace nskr

#endif
