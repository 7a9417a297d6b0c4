#include <cmath>
#include <stdexcept>

#include "nskr/pressure.hpp"

namespace nskr {

double helper_i(double b) {
    if (!(1.0 + b > 0.0)) throw std::domain_error("pressure helpers: density floor violated");
    return b / (1.0 + b);
}

double helper_j(double b, const PressureLaw& p) {
    if (!(1.0 + b > 0.0)) throw std::domain_error("pressure helpers: density floor violated");
    return std::pow(1.0 + b, p.gamma - 1.0) - 1.0;
}

double helper_g(double b, const PressureLaw& p) {
    if (!(1.0 + b > 0.0)) throw std::domain_error("pressure helpers: density floor violated");
    return (std::pow(1.0 + b, p.gamma) - 1.0) / p.gamma - b;
}

double helper_h(double b, const PressureLaw& p) {
    // G(b) = sum_{k>=2} binom(gamma,k)/gamma b^k, so H(b) = sum_{k>=3} binom(gamma,k)/gamma b^{k-2}
    const double g = p.gamma;
    if (std::abs(b) < 1e-4) {
        double coef = (g - 1.0) / 2.0;  // binom(gamma,2)/gamma
        double h = 0.0, bk = 1.0;
        for (int k = 3; k <= 9; ++k) {
            coef *= (g - (k - 1)) / k;
            bk *= b;
            h += coef * bk;
        }
        return h;
    }
    return helper_g(b, p) / (b * b) - (g - 1.0) / 2.0;
}

PressureHelpers eval_pressure_helpers(double b, const PressureLaw& p) {
    return {helper_i(b), helper_j(b, p), helper_g(b, p), helper_h(b, p)};
}

void eval_pressure_helpers(std::span<const double> b, const PressureLaw& p,
                           std::span<double> i_out, std::span<double> j_out,
                           std::span<double> g_out, std::span<double> h_out) {
    for (std::size_t k = 0; k < b.size(); ++k) {
        i_out[k] = helper_i(b[k]);
        j_out[k] = helper_j(b[k], p);
        g_out[k] = helper_g(b[k], p);
        h_out[k] = helper_h(b[k], p);
    }
}

}  // namespace nskr
