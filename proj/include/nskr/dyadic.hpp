#ifndef NSKR_DYADIC_HPP
#define NSKR_DYADIC_HPP

#include <vector>

#include "nskr/field.hpp"
#include "nskr/grid.hpp"
#include "nskr/transform.hpp"

namespace nskr {

// Radial profile of the homogeneous dyadic partition.
//
// chi is a C^2 cutoff equal to 1 for r <= 1 and 0 for r >= 4/3, built from the
// quintic smoothstep; the block profile is phi0(r) = chi(r/2) - chi(r), so
// supp phi0 = {1 <= r <= 8/3} (inside the paper's 3/4 <= r <= 8/3 band) and
// sum_j phi0(2^-j r) = 1 for every r > 0.
double smoothstep_quintic(double t);     // clamped 6t^5 - 15t^4 + 10t^3
double dyadic_chi(double r);             // low-pass cutoff
double dyadic_profile(double r);         // phi0 at radius r
double dyadic_mask_value(double xi_norm, int j);           // phi_j at |xi|
double low_cutoff_mask_value(double xi_norm, int j, int j_min);  // sum of blocks j_min..j-1

// Block j carries the annulus ~ 2^j; masks evaluated exactly from the profile.
class DyadicDecomposition {
  public:
    DyadicDecomposition(const GridSpec& grid, int j_min, int j_max);

    // Default block range for a grid: j_min = -3,
    // j_max = log2(nyquist) - 2 so the top block sits below the dealias cutoff.
    static DyadicDecomposition standard(const GridSpec& grid, int j_min = -3);
    static int default_j_max(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int blocks() const { return j_max_ - j_min_ + 1; }

    double mask(int j, std::size_t flat) const { return masks_[j - j_min_][flat]; }
    const std::vector<double>& mask_row(int j) const { return masks_[j - j_min_]; }
    double radius(std::size_t flat) const { return radius_[flat]; }
    // Fraction of the annulus where the partition sums to one:
    // [ (4/3) 2^{j_min}, 2^{j_max+1} ].
    double coverage_inner() const;
    double coverage_outer() const;
    double partition_sum(std::size_t flat) const;  // sum_j mask(j) at that mode (0 at xi=0)

    void check_block(int j) const;

  private:
    GridSpec grid_;
    int j_min_, j_max_;
    std::vector<double> radius_;               // |xi| per mode, cached
    std::vector<std::vector<double>> masks_;   // per block, per mode
};

// Delta_j f: coefficients multiplied pointwise by the block mask.
SpectralField dyadic_project(const SpectralField& f, const DyadicDecomposition& d, int j);

// S_j f = sum_{j' <= j-1} Delta_{j'} f over the resolved range.
SpectralField low_cutoff(const SpectralField& f, const DyadicDecomposition& d, int j);

// Pointwise physical product followed by one 2/3-rule spectral truncation.
SpectralField dealias_product(const SpectralField& f, const SpectralField& g,
                              const TransformEngine& engine);

// Apply the 2/3-rule truncation in place.
void dealias_truncate(SpectralField& f);

// Relative coefficient mass lying outside the partition coverage (tail report).
double partition_tail_mass(const SpectralField& f, const DyadicDecomposition& d);

}  // namespace nskr

#endif
