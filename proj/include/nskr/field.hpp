#ifndef NSKR_FIELD_HPP
#define NSKR_FIELD_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "nskr/grid.hpp"

namespace nskr {

using cplx = std::complex<double>;

enum class FieldRank { scalar = 1, vector3 = 3 };

// Complex Fourier coefficients on the full N^3 lattice, one block per component.
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(const GridSpec& grid, FieldRank rank)
        : grid_(grid), ncomp_(int(rank)), data_(grid.size() * std::size_t(ncomp_)) {}

    const GridSpec& grid() const { return grid_; }
    int ncomp() const { return ncomp_; }
    FieldRank rank() const { return FieldRank(ncomp_); }
    std::size_t modes() const { return grid_.size(); }

    std::span<cplx> comp(int c) {
        return {data_.data() + std::size_t(c) * grid_.size(), grid_.size()};
    }
    std::span<const cplx> comp(int c) const {
        return {data_.data() + std::size_t(c) * grid_.size(), grid_.size()};
    }
    cplx& at(int c, std::size_t i) { return data_[std::size_t(c) * grid_.size() + i]; }
    const cplx& at(int c, std::size_t i) const { return data_[std::size_t(c) * grid_.size() + i]; }

    void set_zero() { std::fill(data_.begin(), data_.end(), cplx(0.0)); }

    SpectralField& operator+=(const SpectralField& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    SpectralField& operator*=(cplx c) {
        for (auto& v : data_) v *= c;
        return *this;
    }

    // max_k |f(-k) - conj(f(k))| / max_k |f(k)|, maximised over components
    double hermitian_defect() const {
        double worst = 0.0, amp = 0.0;
        for (int c = 0; c < ncomp_; ++c) {
            auto f = comp(c);
            for (std::size_t i = 0; i < f.size(); ++i) {
                amp = std::max(amp, std::abs(f[i]));
                double d = std::abs(f[grid_.conj_index(i)] - std::conj(f[i]));
                worst = std::max(worst, d);
            }
        }
        return amp > 0 ? worst / amp : 0.0;
    }

    void check_compatible(const SpectralField& o) const {
        if (!(grid_ == o.grid_) || ncomp_ != o.ncomp_)
            throw std::invalid_argument("SpectralField: grid/rank mismatch");
    }

  private:
    GridSpec grid_;
    int ncomp_ = 0;
    std::vector<cplx> data_;
};

// The unknowns of the perturbed system: scalar density perturbation a and momentum m.
struct FlowState {
    SpectralField a;  // scalar
    SpectralField m;  // vector3
    double time = 0.0;

    FlowState() = default;
    explicit FlowState(const GridSpec& grid)
        : a(grid, FieldRank::scalar), m(grid, FieldRank::vector3) {}

    const GridSpec& grid() const { return a.grid(); }
};

}  // namespace nskr

#endif
