#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "nskr/dyadic.hpp"
#include "nskr/transform.hpp"

namespace nskr {

// ---------------------------------------------------------------- transforms

TransformEngine::TransformEngine(const GridSpec& grid)
    : grid_(grid), scratch_(grid.size()) {
    // FFTW_ESTIMATE keeps planning deterministic run-to-run.
    plan_fwd_ = fftw_plan_dft_3d(grid_.n, grid_.n, grid_.n,
                                 reinterpret_cast<fftw_complex*>(scratch_.data()),
                                 reinterpret_cast<fftw_complex*>(scratch_.data()),
                                 FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_3d(grid_.n, grid_.n, grid_.n,
                                 reinterpret_cast<fftw_complex*>(scratch_.data()),
                                 reinterpret_cast<fftw_complex*>(scratch_.data()),
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("TransformEngine: FFTW planning failed");
}

TransformEngine::~TransformEngine() {
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void TransformEngine::forward(std::span<const double> phys, std::span<cplx> coeffs) const {
    if (phys.size() != grid_.size() || coeffs.size() != grid_.size())
        throw std::invalid_argument("forward transform: sample count does not match grid");
    for (std::size_t i = 0; i < phys.size(); ++i) scratch_[i] = cplx(phys[i], 0.0);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double w = grid_.cell_volume();
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = w * scratch_[i];
}

void TransformEngine::inverse(std::span<const cplx> coeffs, std::span<double> phys,
                              double imag_tol) const {
    if (phys.size() != grid_.size() || coeffs.size() != grid_.size())
        throw std::invalid_argument("inverse transform: coefficient count does not match grid");
    std::copy(coeffs.begin(), coeffs.end(), scratch_.begin());
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    const double w = 1.0 / std::pow(grid_.box_length, 3);
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < phys.size(); ++i) {
        double re = w * scratch_[i].real(), im = w * scratch_[i].imag();
        phys[i] = re;
        max_re = std::max(max_re, std::abs(re));
        max_im = std::max(max_im, std::abs(im));
    }
    if (max_im > imag_tol * std::max(max_re, 1e-300))
        throw std::runtime_error("inverse transform: Hermitian symmetry violated (imaginary residue " +
                                 std::to_string(max_im / std::max(max_re, 1e-300)) + ")");
}

SpectralField TransformEngine::forward_field(const std::vector<double>& phys, FieldRank rank) const {
    SpectralField out(grid_, rank);
    const std::size_t n = grid_.size();
    if (phys.size() != n * std::size_t(out.ncomp()))
        throw std::invalid_argument("forward transform: sample count does not match grid");
    for (int c = 0; c < out.ncomp(); ++c)
        forward({phys.data() + c * n, n}, out.comp(c));
    return out;
}

std::vector<double> TransformEngine::inverse_field(const SpectralField& f, double imag_tol) const {
    const std::size_t n = grid_.size();
    std::vector<double> phys(n * std::size_t(f.ncomp()));
    for (int c = 0; c < f.ncomp(); ++c)
        inverse(f.comp(c), {phys.data() + c * n, n}, imag_tol);
    return phys;
}

// ------------------------------------------------------- spectral derivatives

SpectralField gradient(const SpectralField& scalar) {
    if (scalar.ncomp() != 1) throw std::invalid_argument("gradient expects a scalar field");
    const GridSpec& g = scalar.grid();
    const auto freq = g.axis_frequencies();
    SpectralField out(g, FieldRank::vector3);
    const cplx* in = scalar.comp(0).data();
    cplx* o0 = out.comp(0).data();
    cplx* o1 = out.comp(1).data();
    cplx* o2 = out.comp(2).data();
    std::size_t i = 0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c, ++i) {
                cplx v = cplx(0.0, 1.0) * in[i];
                o0[i] = freq[a] * v;
                o1[i] = freq[b] * v;
                o2[i] = freq[c] * v;
            }
    return out;
}

SpectralField divergence(const SpectralField& vec) {
    if (vec.ncomp() != 3) throw std::invalid_argument("divergence expects a vector field");
    const GridSpec& g = vec.grid();
    const auto freq = g.axis_frequencies();
    SpectralField out(g, FieldRank::scalar);
    const cplx* v0 = vec.comp(0).data();
    const cplx* v1 = vec.comp(1).data();
    const cplx* v2 = vec.comp(2).data();
    cplx* o = out.comp(0).data();
    std::size_t i = 0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c, ++i)
                o[i] = cplx(0.0, 1.0) * (freq[a] * v0[i] + freq[b] * v1[i] + freq[c] * v2[i]);
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    const GridSpec& g = f.grid();
    const auto freq = g.axis_frequencies();
    SpectralField out(g, f.rank());
    for (int comp = 0; comp < f.ncomp(); ++comp) {
        const cplx* in = f.comp(comp).data();
        cplx* o = out.comp(comp).data();
        std::size_t i = 0;
        for (int a = 0; a < g.n; ++a)
            for (int b = 0; b < g.n; ++b)
                for (int c = 0; c < g.n; ++c, ++i)
                    o[i] = -(freq[a] * freq[a] + freq[b] * freq[b] + freq[c] * freq[c]) * in[i];
    }
    return out;
}

// ------------------------------------------------------------ dyadic masks

double smoothstep_quintic(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double dyadic_chi(double r) {
    // 1 on r <= 1, 0 on r >= 4/3, C^2 quintic ramp between
    return 1.0 - smoothstep_quintic((r - 1.0) * 3.0);
}

double dyadic_profile(double r) { return dyadic_chi(r / 2.0) - dyadic_chi(r); }

double dyadic_mask_value(double xi_norm, int j) {
    if (xi_norm == 0.0) return 0.0;
    return dyadic_profile(std::ldexp(xi_norm, -j));
}

double low_cutoff_mask_value(double xi_norm, int j, int j_min) {
    // telescoped sum of phi_{j'} over j_min <= j' <= j-1
    if (xi_norm == 0.0 || j <= j_min) return 0.0;
    return dyadic_chi(std::ldexp(xi_norm, -j)) - dyadic_chi(std::ldexp(xi_norm, -j_min));
}

DyadicDecomposition::DyadicDecomposition(const GridSpec& grid, int j_min, int j_max)
    : grid_(grid), j_min_(j_min), j_max_(j_max), radius_(grid.size()) {
    if (j_min > j_max) throw std::invalid_argument("DyadicDecomposition: empty block range");
    if (!((8.0 / 3.0) * std::ldexp(1.0, j_max) < grid.nyquist()))
        throw std::invalid_argument(
            "DyadicDecomposition: Nyquist frequency does not resolve the top block");
    for (std::size_t i = 0; i < grid.size(); ++i) radius_[i] = grid.xi_norm(i);
    masks_.resize(blocks());
    for (int j = j_min_; j <= j_max_; ++j) {
        auto& row = masks_[j - j_min_];
        row.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) row[i] = dyadic_mask_value(radius_[i], j);
    }
}

int DyadicDecomposition::default_j_max(const GridSpec& grid) {
    return int(std::floor(std::log2(grid.nyquist()) * (1.0 + 1e-14))) - 2;
}

DyadicDecomposition DyadicDecomposition::standard(const GridSpec& grid, int j_min) {
    return DyadicDecomposition(grid, j_min, default_j_max(grid));
}

double DyadicDecomposition::coverage_inner() const { return (4.0 / 3.0) * std::ldexp(1.0, j_min_); }
double DyadicDecomposition::coverage_outer() const { return std::ldexp(1.0, j_max_ + 1); }

double DyadicDecomposition::partition_sum(std::size_t flat) const {
    double r = radius_[flat];
    if (r == 0.0) return 0.0;
    return dyadic_chi(std::ldexp(r, -(j_max_ + 1))) - dyadic_chi(std::ldexp(r, -j_min_));
}

void DyadicDecomposition::check_block(int j) const {
    if (j < j_min_ || j > j_max_)
        throw std::out_of_range("dyadic block index outside resolved range");
}

SpectralField dyadic_project(const SpectralField& f, const DyadicDecomposition& d, int j) {
    d.check_block(j);
    if (!(f.grid() == d.grid())) throw std::invalid_argument("dyadic_project: grid mismatch");
    SpectralField out(f.grid(), f.rank());
    for (std::size_t i = 0; i < f.modes(); ++i) {
        double m = d.mask(j, i);
        if (m == 0.0) continue;
        for (int c = 0; c < f.ncomp(); ++c) out.at(c, i) = m * f.at(c, i);
    }
    return out;
}

SpectralField low_cutoff(const SpectralField& f, const DyadicDecomposition& d, int j) {
    if (!(f.grid() == d.grid())) throw std::invalid_argument("low_cutoff: grid mismatch");
    // only resolved blocks contribute; j beyond the top yields the full covered field
    const int j_eff = std::min(j, d.j_max() + 1);
    SpectralField out(f.grid(), f.rank());
    for (std::size_t i = 0; i < f.modes(); ++i) {
        double m = low_cutoff_mask_value(d.radius(i), j_eff, d.j_min());
        if (m == 0.0) continue;
        for (int c = 0; c < f.ncomp(); ++c) out.at(c, i) = m * f.at(c, i);
    }
    return out;
}

void dealias_truncate(SpectralField& f) {
    const GridSpec& g = f.grid();
    const int cut = g.dealias_cutoff();
    std::vector<bool> kill(g.n);
    for (int i = 0; i < g.n; ++i) kill[i] = std::abs(g.wrap(i)) > cut;
    for (int comp = 0; comp < f.ncomp(); ++comp) {
        cplx* v = f.comp(comp).data();
        std::size_t i = 0;
        for (int a = 0; a < g.n; ++a)
            for (int b = 0; b < g.n; ++b) {
                if (kill[a] || kill[b]) {
                    std::fill(v + i, v + i + g.n, cplx(0.0));
                    i += std::size_t(g.n);
                    continue;
                }
                for (int c = 0; c < g.n; ++c, ++i)
                    if (kill[c]) v[i] = 0.0;
            }
    }
}

SpectralField dealias_product(const SpectralField& f, const SpectralField& g,
                              const TransformEngine& engine) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("dealias_product: grid mismatch");
    if (f.ncomp() != 1 || g.ncomp() != 1)
        throw std::invalid_argument("dealias_product operates on scalar fields");
    const std::size_t n = f.grid().size();
    std::vector<double> pf(n), pg(n);
    engine.inverse(f.comp(0), pf);
    engine.inverse(g.comp(0), pg);
    for (std::size_t i = 0; i < n; ++i) pf[i] *= pg[i];
    SpectralField out(f.grid(), FieldRank::scalar);
    engine.forward(pf, out.comp(0));
    dealias_truncate(out);
    return out;
}

double partition_tail_mass(const SpectralField& f, const DyadicDecomposition& d) {
    // zero mode excluded: homogeneous decompositions never see it
    double tail = 0.0, total = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) {
        auto v = f.comp(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (d.radius(i) == 0.0) continue;
            double a = std::abs(v[i]);
            if (a == 0.0) continue;
            total += a;
            tail += a * (1.0 - d.partition_sum(i));
        }
    }
    return total > 0 ? tail / total : 0.0;
}

}  // namespace nskr
