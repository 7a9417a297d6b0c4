#ifndef NSKR_NORMS_HPP
#define NSKR_NORMS_HPP

#include <limits>
#include <optional>
#include <vector>

#include "nskr/dyadic.hpp"
#include "nskr/field.hpp"
#include "nskr/transform.hpp"

namespace nskr {

inline constexpr double p_inf = std::numeric_limits<double>::infinity();

enum class NormFlavor { besov, fourier_besov };

struct NormSpec {
    double s = 0.0;         // regularity
    double p = 2.0;         // integrability, [1, inf]
    double sigma = 1.0;     // block summation, [1, inf]
    NormFlavor flavor = NormFlavor::fourier_besov;

    void validate() const;
};

// Block selection by threshold: low 2^j <= alpha, middle alpha < 2^j <= beta, high 2^j > beta.
struct TruncationBand {
    enum class Mode { low, middle, high, all };
    Mode mode = Mode::all;
    double alpha = 0.0;
    double beta = 0.0;

    static TruncationBand low(double a) { return {Mode::low, a, a}; }
    static TruncationBand middle(double a, double b) { return {Mode::middle, a, b}; }
    static TruncationBand high(double b) { return {Mode::high, b, b}; }
    static TruncationBand all() { return {Mode::all, 0.0, 0.0}; }

    bool contains(int j) const;
    void validate() const;
};

double holder_conjugate(double p);

// || f ||_{hat L^p} = || f_hat ||_{L^{p'}} with frequency-cell weight (2*pi/L)^3.
// Zero mode excluded (homogeneous convention); component norms are summed.
double fourier_lebesgue_norm(const SpectralField& f, double p);

// Collocation L^p norm of physical samples with uniform weight (L/N)^3.
double collocation_lp_norm(std::span<const double> phys, const GridSpec& grid, double p);

// Per-block norms ||Delta_j f|| for j = j_min..j_max, component-summed.
// besov flavor needs a transform engine for the per-block inverse transforms.
std::vector<double> block_norms(const SpectralField& f, const DyadicDecomposition& d,
                                double p, NormFlavor flavor,
                                const TransformEngine* engine = nullptr);

// l^sigma aggregation of 2^{js} * block value over selected blocks.
double aggregate_blocks(const std::vector<double>& blocks, int j_min, double s, double sigma,
                        const TruncationBand& band = TruncationBand::all());

double besov_norm(const SpectralField& f, const DyadicDecomposition& d, const NormSpec& spec,
                  const TransformEngine* engine = nullptr);
double fourier_besov_norm(const SpectralField& f, const DyadicDecomposition& d, double s,
                          double p = 2.0, double sigma = 1.0);
double truncated_norm(const SpectralField& f, const DyadicDecomposition& d, const NormSpec& spec,
                      const TruncationBand& band, const TransformEngine* engine = nullptr);

// ------------------------------------------------------------------ in time

// Sample times with per-block norms; quadrature is trapezoidal on the sample grid.
class TimeTrace {
  public:
    TimeTrace(int j_min, int j_max) : j_min_(j_min), j_max_(j_max) {}

    void append(double t, std::vector<double> block_row);
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    std::size_t samples() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& row(std::size_t i) const { return rows_[i]; }
    std::vector<double> quadrature_weights() const;

    // time-L^r per block (r = inf as max over samples), then block aggregation upstream
    std::vector<double> block_time_lr(double r) const;

  private:
    int j_min_, j_max_;
    std::vector<double> times_;
    std::vector<std::vector<double>> rows_;
};

// Chemin-Lerner norm: per-block time-L^r first, then weighted l^sigma over blocks.
double chemin_lerner_norm(const TimeTrace& trace, double s, double sigma, double r,
                          const TruncationBand& band = TruncationBand::all());

// Convenience: trace of Fourier-Besov (or Besov) block norms of (possibly several) fields.
std::vector<double> stacked_block_norms(const std::vector<const SpectralField*>& fields,
                                        const DyadicDecomposition& d, double p, NormFlavor flavor,
                                        const TransformEngine* engine = nullptr);

// One norm-report CSV row: norm_kind,s,p,sigma,r,band,value,tail_mass.
std::string norm_report_row(const SpectralField& f, const DyadicDecomposition& d,
                            const NormSpec& spec, const TruncationBand& band, double r,
                            const TransformEngine* engine = nullptr);
std::string norm_report_header();

}  // namespace nskr

#endif
