#ifndef NSKR_FIELDS_IO_HPP
#define NSKR_FIELDS_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "nskr/dyadic.hpp"
#include "nskr/field.hpp"

namespace nskr {

// Snapshot formats: CSV rows (k1,k2,k3,comp,re,im) and little-endian binary,
// both headed by L, N and rank.
void write_field_csv(const SpectralField& f, const std::string& path);
SpectralField read_field_csv(const std::string& path);
void write_field_binary(const SpectralField& f, const std::string& path);
SpectralField read_field_binary(const std::string& path);

// --------------------------------------------------------- random data

// Hermitian random field supported on the chosen blocks' exclusive annuli,
// rescaled so each block's Fourier-Besov amplitude 2^{js} ||Delta_j f||_{L^p_hat}
// matches the request exactly. Seeds make runs reproducible.
SpectralField random_band_field(const GridSpec& grid, const DyadicDecomposition& d,
                                const std::map<int, double>& block_amplitudes, double s, double p,
                                unsigned seed, FieldRank rank = FieldRank::scalar);

// Smooth random spectrum sampled from a fixed continuum profile; refining N
// samples the same function, so norms are stable under grid refinement.
SpectralField continuum_random_field(const GridSpec& grid, double inner_radius,
                                     double outer_radius, unsigned seed,
                                     FieldRank rank = FieldRank::scalar);

FlowState random_flow_state(const GridSpec& grid, const DyadicDecomposition& d,
                            const std::map<int, double>& block_amplitudes, double s, double p,
                            unsigned seed);

}  // namespace nskr

#endif
