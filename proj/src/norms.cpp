#include <algorithm>
#include <cstdio>
#include <string>
#include <cmath>
#include <stdexcept>

#include "nskr/bony.hpp"
#include "nskr/norms.hpp"

namespace nskr {

void NormSpec::validate() const {
    if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: p must lie in [1, inf]");
    if (!(sigma >= 1.0)) throw std::invalid_argument("NormSpec: sigma must lie in [1, inf]");
}

bool TruncationBand::contains(int j) const {
    double two_j = std::ldexp(1.0, j);
    switch (mode) {
        case Mode::low: return two_j <= alpha;
        case Mode::middle: return two_j > alpha && two_j <= beta;
        case Mode::high: return two_j > beta;
        case Mode::all: return true;
    }
    return false;
}

void TruncationBand::validate() const {
    if (mode == Mode::all) return;
    if (!(alpha > 0.0) && mode != Mode::high)
        throw std::invalid_argument("TruncationBand: alpha must be positive");
    if (mode == Mode::middle && !(beta >= alpha))
        throw std::invalid_argument("TruncationBand: beta must be >= alpha");
    if (mode == Mode::high && !(beta > 0.0))
        throw std::invalid_argument("TruncationBand: beta must be positive");
}

double holder_conjugate(double p) {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return p_inf;
    return p / (p - 1.0);
}

namespace {

// weighted l^q of |values| with per-entry weight w (measure); q = inf as max
class LqAccumulator {
  public:
    LqAccumulator(double q, double weight) : q_(q), w_(weight) {
        kind_ = std::isinf(q) ? Kind::max : q == 1.0 ? Kind::one : q == 2.0 ? Kind::two
                                                                            : Kind::general;
    }
    void add(double a) {
        if (a == 0.0) return;
        switch (kind_) {
            case Kind::max: acc_ = std::max(acc_, a); break;
            case Kind::one: acc_ += w_ * a; break;
            case Kind::two: acc_ += w_ * a * a; break;
            case Kind::general: acc_ += w_ * std::pow(a, q_); break;
        }
    }
    double value() const {
        switch (kind_) {
            case Kind::max:
            case Kind::one: return acc_;
            case Kind::two: return std::sqrt(acc_);
            case Kind::general: return std::pow(acc_, 1.0 / q_);
        }
        return acc_;
    }

  private:
    enum class Kind { max, one, two, general };
    double q_, w_;
    Kind kind_;
    double acc_ = 0.0;
};

}  // namespace

double fourier_lebesgue_norm(const SpectralField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("fourier_lebesgue_norm: p must lie in [1, inf]");
    const double pp = holder_conjugate(p);
    const GridSpec& g = f.grid();
    double total = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) {
        LqAccumulator acc(pp, g.freq_cell_volume());
        auto v = f.comp(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (g.xi_norm(i) == 0.0) continue;
            acc.add(std::abs(v[i]));
        }
        total += acc.value();
    }
    return total;
}

double collocation_lp_norm(std::span<const double> phys, const GridSpec& grid, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("collocation_lp_norm: p must lie in [1, inf]");
    LqAccumulator acc(p, grid.cell_volume());
    for (double v : phys) acc.add(std::abs(v));
    return acc.value();
}

std::vector<double> block_norms(const SpectralField& f, const DyadicDecomposition& d,
                                double p, NormFlavor flavor, const TransformEngine* engine) {
    if (!(f.grid() == d.grid())) throw std::invalid_argument("block_norms: grid mismatch");
    const GridSpec& g = f.grid();
    std::vector<double> out(d.blocks(), 0.0);
    if (flavor == NormFlavor::fourier_besov) {
        const double pp = holder_conjugate(p);
        for (int b = 0; b < d.blocks(); ++b) {
            const auto& mask = d.mask_row(d.j_min() + b);
            double total = 0.0;
            for (int c = 0; c < f.ncomp(); ++c) {
                LqAccumulator acc(pp, g.freq_cell_volume());
                auto v = f.comp(c);
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (mask[i] == 0.0) continue;
                    acc.add(mask[i] * std::abs(v[i]));
                }
                total += acc.value();
            }
            out[b] = total;
        }
    } else {
        if (!engine) throw std::invalid_argument("block_norms: besov flavor needs a transform engine");
        std::vector<double> phys(g.size());
        std::vector<cplx> masked(g.size());
        for (int b = 0; b < d.blocks(); ++b) {
            const auto& mask = d.mask_row(d.j_min() + b);
            double total = 0.0;
            for (int c = 0; c < f.ncomp(); ++c) {
                auto v = f.comp(c);
                for (std::size_t i = 0; i < v.size(); ++i) masked[i] = mask[i] * v[i];
                engine->inverse(masked, phys);
                total += collocation_lp_norm(phys, g, p);
            }
            out[b] = total;
        }
    }
    return out;
}

double aggregate_blocks(const std::vector<double>& blocks, int j_min, double s, double sigma,
                        const TruncationBand& band) {
    LqAccumulator acc(sigma, 1.0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        int j = j_min + int(b);
        if (!band.contains(j)) continue;
        acc.add(std::pow(2.0, j * s) * blocks[b]);
    }
    return acc.value();
}

double besov_norm(const SpectralField& f, const DyadicDecomposition& d, const NormSpec& spec,
                  const TransformEngine* engine) {
    spec.validate();
    auto blocks = block_norms(f, d, spec.p, spec.flavor, engine);
    return aggregate_blocks(blocks, d.j_min(), spec.s, spec.sigma);
}

double fourier_besov_norm(const SpectralField& f, const DyadicDecomposition& d, double s,
                          double p, double sigma) {
    return besov_norm(f, d, NormSpec{s, p, sigma, NormFlavor::fourier_besov}, nullptr);
}

double truncated_norm(const SpectralField& f, const DyadicDecomposition& d, const NormSpec& spec,
                      const TruncationBand& band, const TransformEngine* engine) {
    spec.validate();
    band.validate();
    auto blocks = block_norms(f, d, spec.p, spec.flavor, engine);
    return aggregate_blocks(blocks, d.j_min(), spec.s, spec.sigma, band);
}

// ------------------------------------------------------------------ in time

void TimeTrace::append(double t, std::vector<double> block_row) {
    if (int(block_row.size()) != j_max_ - j_min_ + 1)
        throw std::invalid_argument("TimeTrace: block row size mismatch");
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("TimeTrace: sample times must increase");
    times_.push_back(t);
    rows_.push_back(std::move(block_row));
}

std::vector<double> TimeTrace::quadrature_weights() const {
    const std::size_t m = times_.size();
    std::vector<double> w(m, 0.0);
    if (m < 2) return w;
    w[0] = 0.5 * (times_[1] - times_[0]);
    for (std::size_t i = 1; i + 1 < m; ++i) w[i] = 0.5 * (times_[i + 1] - times_[i - 1]);
    w[m - 1] = 0.5 * (times_[m - 1] - times_[m - 2]);
    return w;
}

std::vector<double> TimeTrace::block_time_lr(double r) const {
    if (times_.empty()) throw std::invalid_argument("TimeTrace: empty trace");
    const int nb = j_max_ - j_min_ + 1;
    std::vector<double> out(nb, 0.0);
    if (std::isinf(r)) {
        for (const auto& row : rows_)
            for (int b = 0; b < nb; ++b) out[b] = std::max(out[b], row[b]);
        return out;
    }
    auto w = quadrature_weights();
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (int b = 0; b < nb; ++b) out[b] += w[i] * std::pow(rows_[i][b], r);
    for (int b = 0; b < nb; ++b) out[b] = std::pow(out[b], 1.0 / r);
    return out;
}

double chemin_lerner_norm(const TimeTrace& trace, double s, double sigma, double r,
                          const TruncationBand& band) {
    if (!(r >= 1.0)) throw std::invalid_argument("chemin_lerner_norm: r must lie in [1, inf]");
    auto blocks = trace.block_time_lr(r);
    return aggregate_blocks(blocks, trace.j_min(), s, sigma, band);
}

std::vector<double> stacked_block_norms(const std::vector<const SpectralField*>& fields,
                                        const DyadicDecomposition& d, double p, NormFlavor flavor,
                                        const TransformEngine* engine) {
    std::vector<double> out(d.blocks(), 0.0);
    for (const SpectralField* f : fields) {
        auto b = block_norms(*f, d, p, flavor, engine);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    }
    return out;
}

std::string norm_report_header() { return "norm_kind,s,p,sigma,r,band,value,tail_mass"; }

std::string norm_report_row(const SpectralField& f, const DyadicDecomposition& d,
                            const NormSpec& spec, const TruncationBand& band, double r,
                            const TransformEngine* engine) {
    double value = truncated_norm(f, d, spec, band, engine);
    double tail = partition_tail_mass(f, d);
    const char* kind = spec.flavor == NormFlavor::fourier_besov ? "fourier_besov" : "besov";
    const char* bname = band.mode == TruncationBand::Mode::low      ? "low"
                        : band.mode == TruncationBand::Mode::middle ? "middle"
                        : band.mode == TruncationBand::Mode::high   ? "high"
                                                                    : "all";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%g,%g,%g,%g,%s,%.12g,%.3g", kind, spec.s, spec.p,
                  spec.sigma, r, bname, value, tail);
    return buf;
}

// --------------------------------------------------------------------- Bony

void require_resolved(const SpectralField& f, const DyadicDecomposition& d, double tol) {
    double tail = partition_tail_mass(f, d);
    if (tail > tol)
        throw std::runtime_error("Bony decomposition: input not resolved by the block range (tail mass " +
                                 std::to_string(tail) + ")");
}

SpectralField bony_paraproduct(const SpectralField& f, const SpectralField& g,
                               const DyadicDecomposition& d, const TransformEngine& engine) {
    require_resolved(f, d);
    require_resolved(g, d);
    SpectralField out(f.grid(), FieldRank::scalar);
    for (int j = d.j_min(); j <= d.j_max(); ++j) {
        SpectralField sf = low_cutoff(f, d, j - 1);
        SpectralField dg = dyadic_project(g, d, j);
        out += dealias_product(sf, dg, engine);
    }
    return out;
}

SpectralField bony_remainder(const SpectralField& f, const SpectralField& g,
                             const DyadicDecomposition& d, const TransformEngine& engine) {
    require_resolved(f, d);
    require_resolved(g, d);
    SpectralField out(f.grid(), FieldRank::scalar);
    for (int j = d.j_min(); j <= d.j_max(); ++j) {
        SpectralField df = dyadic_project(f, d, j);
        for (int jp = std::max(j - 1, d.j_min()); jp <= std::min(j + 1, d.j_max()); ++jp) {
            SpectralField dg = dyadic_project(g, d, jp);
            out += dealias_product(df, dg, engine);
        }
    }
    return out;
}

}  // namespace nskr
