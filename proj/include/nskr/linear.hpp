#ifndef NSKR_LINEAR_HPP
#define NSKR_LINEAR_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "nskr/field.hpp"
#include "nskr/params.hpp"

namespace nskr {

using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using Xi = std::array<double, 3>;

// Generator of d/dt (a_hat, m_hat) = A (a_hat, m_hat) at one frequency:
//   da/dt = -(i/eps) xi . m
//   dm/dt = -mu|xi|^2 m - (mu+lambda) xi (xi.m) - Omega e3 x m - (i/eps) xi a - i kappa eps |xi|^2 xi a
// The inviscid variant keeps only the Coriolis and acoustic couplings (skew-Hermitian).
struct ModeMatrix {
    Mat4 a;
    Xi xi{0, 0, 0};
    bool viscous = true;
};

ModeMatrix assemble_mode_matrix(const Xi& xi, const PhysParams& params, bool viscous = true);

// e^{tA} by scaling-and-squaring with diagonal Pade (order 13); t >= 0.
Mat4 mode_exponential(const ModeMatrix& m, double t);

// e^{hA}, phi1(hA), phi2(hA) from one augmented-block exponential.
struct PhiSet {
    Mat4 exp_h, phi1, phi2;
};
PhiSet mode_phi_set(const Mat4& a, double h);

double spectral_abscissa(const ModeMatrix& m);

// |(a_hat, eps*i*xi*a_hat, m_hat)| used by the decay statements.
double augmented_norm(const Xi& xi, const Vec4& u, double eps);

struct LyapunovReport {
    double v2 = 0.0;     // Lyapunov functional value
    double q = 0.0;      // (Omega^2 eps^2 + |xi|^2) |(a, sqrt(kappa) eps i xi a, m)|^2
    double ratio = 0.0;  // v2 / q, expected in [1/2, 3/2]
};
LyapunovReport lyapunov_value(const Xi& xi, const Vec4& state, const PhysParams& params);

// ------------------------------------------------------------- mode checks

struct DecayCheckRow {
    double xi_norm = 0, omega = 0, eps = 0;
    double abscissa = 0;  // max Re eig A(xi)
    double bound = 0;     // -(eta/3) Theta(|xi|, Omega eps)
    double margin = 0;    // bound - abscissa  (>= 0 when the decay law holds)
};
DecayCheckRow check_mode_decay(const Xi& xi, const PhysParams& params);

// Late-window exponential rate of |(a, eps i xi a, m)(t)| from an integrated mode.
double fit_mode_decay_rate(const ModeMatrix& m, const Vec4& u0, double t_end, int samples);

// --------------------------------------------------- grid-level propagation

struct ForcingTrace {
    std::vector<double> times;          // uniform grid, first entry = state time
    std::vector<SpectralField> values;  // vector3 momentum forcing per sample
};

// Mode-wise exact propagation of the viscous linear system; with forcing, the
// Duhamel integral uses the exponential trapezoidal rule on the trace grid.
std::vector<FlowState> propagate_linear(const FlowState& s0, const PhysParams& params,
                                        const std::vector<double>& times,
                                        const ForcingTrace* forcing = nullptr);

std::vector<FlowState> inviscid_propagate(const FlowState& s0, const PhysParams& params,
                                          const std::vector<double>& times);

// ------------------------------------------- energy-estimate exponent fits

struct EnergyFitRow {
    int j = 0;
    double gain = 0;  // per-block time-L^r norm divided by the datum norm
};
struct EnergyFitResult {
    std::vector<EnergyFitRow> rows;
    double slope = 0;      // fitted d log2(gain) / dj
    double intercept = 0;
    double expected = 0;   // -4/r on the low band, -2/r on the high band
};

// Synthetic single-block data at |xi| = rho * 2^j for each j, evolved exactly
// per mode; measures the L^r(0,T)-in-time block norm of (a, eps grad a, m).
EnergyFitResult verify_energy_estimate(const PhysParams& params, double r,
                                       const std::vector<int>& blocks, bool low_band,
                                       double rho = 1.5, int directions = 4,
                                       int samples = 4000, unsigned seed = 1234);

// ------------------------------------------------------------- Strichartz

struct StrichartzPoint {
    double omega = 0;
    double norm = 0;  // ||(a,m)||_{L^r(0,T;L^q)}
};
struct StrichartzResult {
    std::vector<StrichartzPoint> points;
    double slope = 0;      // fitted d log||.|| / d log Omega
    double fit_residual = 0;
};

class TransformEngine;

// Inviscid sweep over Omega at fixed datum; spatial L^q on the collocation
// grid, time-L^r by trapezoid on n_samples points over [0,T].
StrichartzResult measure_strichartz(const FlowState& datum, const PhysParams& base,
                                    const std::vector<double>& omegas, double q_exp, double r_exp,
                                    double t_end, int n_samples, const TransformEngine& engine);

// Divergence-free, vertically-oscillating wave packet supported on the given
// blocks with the k3 = 0 plane removed: rotation-active high-band datum.
FlowState strichartz_packet(const GridSpec& grid, int j_lo, int j_hi, double amplitude,
                            unsigned seed = 99);

}  // namespace nskr

#endif
