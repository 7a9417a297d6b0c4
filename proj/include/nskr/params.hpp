#ifndef NSKR_PARAMS_HPP
#define NSKR_PARAMS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nskr {

// Power-law pressure P(rho) = rho^gamma / gamma, so P'(1) = 1.
struct PressureLaw {
    double gamma = 2.0;

    PressureLaw() = default;
    explicit PressureLaw(double gamma_) : gamma(gamma_) {
        if (!(gamma > 1.0)) throw std::invalid_argument("PressureLaw: gamma must exceed 1");
    }
    double p(double rho) const { return std::pow(rho, gamma) / gamma; }
    double dp(double rho) const { return std::pow(rho, gamma - 1.0); }
};

struct PhysParams {
    double mu = 1.0;      // shear viscosity, > 0
    double lambda = 1.0;  // bulk viscosity, with 2*mu + lambda > 0
    double kappa = 1.0;   // capillary coefficient, > 0
    double eps = 1.0;     // Mach number, > 0
    double omega = 0.0;   // rotation speed, any sign
    PressureLaw pressure;

    PhysParams() = default;
    PhysParams(double mu_, double lambda_, double kappa_, double eps_, double omega_,
               PressureLaw pr = PressureLaw())
        : mu(mu_), lambda(lambda_), kappa(kappa_), eps(eps_), omega(omega_), pressure(pr) {
        validate();
    }

    void validate() const {
        if (!(mu > 0)) throw std::invalid_argument("PhysParams: mu must be positive");
        if (!(2 * mu + lambda > 0)) throw std::invalid_argument("PhysParams: 2*mu + lambda must be positive");
        if (!(kappa > 0)) throw std::invalid_argument("PhysParams: kappa must be positive");
        if (!(eps > 0)) throw std::invalid_argument("PhysParams: eps must be positive");
    }

    double nu() const { return 2 * mu + lambda; }
    double mu_lower() const { return std::min(mu, 1.0); }
    // eta := min{1/2, kappa/2, kappa*mu_/2, mu_/4, sqrt(kappa)}
    double eta() const {
        double mul = mu_lower();
        return std::min({0.5, kappa / 2.0, kappa * mul / 2.0, mul / 4.0, std::sqrt(kappa)});
    }
    double rotation_threshold() const { return std::abs(omega) * eps; }  // |Omega| * eps
};

// Theta(|xi|, Omega*eps) = |xi|^4 / (Omega^2 eps^2 + |xi|^2); 0 at xi = 0.
inline double decay_rate_theta(double xi_norm, double omega, double eps) {
    double r2 = xi_norm * xi_norm;
    double d = omega * omega * eps * eps + r2;
    if (d == 0.0) return 0.0;
    return r2 * r2 / d;
}

}  // namespace nskr

#endif
