#ifndef NSKR_GRID_HPP
#define NSKR_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nskr {

// Periodic cubic box [0,L)^3 sampled on an N^3 collocation grid.
// Frequency lattice: xi_k = (2*pi/L) * k, k in {-N/2, ..., N/2-1}^3,
// stored in standard FFT wrap order (component index i maps to i or i-N).
struct GridSpec {
    int n = 0;              // points per axis, even, >= 8
    double box_length = 0;  // L

    GridSpec() = default;
    GridSpec(int n_, double box_length_) : n(n_), box_length(box_length_) {
        if (n < 8 || n % 2 != 0)
            throw std::invalid_argument("GridSpec: N must be even and >= 8");
        if (!(box_length > 0))
            throw std::invalid_argument("GridSpec: box period must be positive");
    }

    // box with frequency lattice spacing 2^-log2_spacing... expressed as L = 2*pi*l_over_2pi
    static GridSpec cube(int n_, double l_over_2pi) {
        return GridSpec(n_, 2.0 * M_PI * l_over_2pi);
    }

    std::size_t size() const { return std::size_t(n) * n * n; }
    double dx() const { return box_length / n; }
    double dk() const { return 2.0 * M_PI / box_length; }
    double nyquist() const { return dk() * (n / 2); }
    double cell_volume() const { return dx() * dx() * dx(); }            // quadrature weight (L/N)^3
    double freq_cell_volume() const { return dk() * dk() * dk(); }       // (2*pi/L)^3

    // 2/3-rule: integer wavenumbers with |k_i| <= n/3 are retained after products
    int dealias_cutoff() const { return n / 3; }

    int wrap(int idx) const { return idx < n / 2 ? idx : idx - n; }
    int unwrap(int k) const { return k >= 0 ? k : k + n; }

    std::size_t flat(int i0, int i1, int i2) const {
        return (std::size_t(i0) * n + i1) * n + i2;
    }
    std::array<int, 3> wave_index(std::size_t flat_idx) const {
        int i2 = int(flat_idx % n);
        int i1 = int((flat_idx / n) % n);
        int i0 = int(flat_idx / (std::size_t(n) * n));
        return {wrap(i0), wrap(i1), wrap(i2)};
    }
    std::array<double, 3> xi(std::size_t flat_idx) const {
        auto k = wave_index(flat_idx);
        double h = dk();
        return {h * k[0], h * k[1], h * k[2]};
    }
    double xi_norm(std::size_t flat_idx) const {
        auto k = wave_index(flat_idx);
        return dk() * std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]);
    }
    // flat index of -k (mod-N negation; Nyquist planes are their own mirror)
    std::size_t conj_index(std::size_t flat_idx) const {
        auto k = wave_index(flat_idx);
        return flat(unwrap(k[0] == -n / 2 ? -n / 2 : -k[0]),
                    unwrap(k[1] == -n / 2 ? -n / 2 : -k[1]),
                    unwrap(k[2] == -n / 2 ? -n / 2 : -k[2]));
    }

    // per-axis frequency table in storage order (hot loops iterate axes directly)
    std::vector<double> axis_frequencies() const {
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = dk() * wrap(i);
        return out;
    }

    bool operator==(const GridSpec& o) const {
        return n == o.n && box_length == o.box_length;
    }
};

}  // namespace nskr

#endif
