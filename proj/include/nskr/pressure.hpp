#ifndef NSKR_PRESSURE_HPP
#define NSKR_PRESSURE_HPP

#include <span>
#include <vector>

#include "nskr/params.hpp"

namespace nskr {

// Pointwise helpers of the momentum-form nonlinearity for P(rho) = rho^gamma/gamma:
//   I(b) = b/(1+b)
//   J(b) = P'(1+b) - 1 = (1+b)^{gamma-1} - 1
//   G(b) = int_0^b J = ((1+b)^gamma - 1)/gamma - b
//   H(b) = G(b)/b^2 - G''(0)/2, extended through b = 0 by its series.
struct PressureHelpers {
    double i = 0, j = 0, g = 0, h = 0;
};

double helper_i(double b);
double helper_j(double b, const PressureLaw& p);
double helper_g(double b, const PressureLaw& p);
double helper_h(double b, const PressureLaw& p);
PressureHelpers eval_pressure_helpers(double b, const PressureLaw& p);

// Throws on density-floor violation (1 + b must stay positive).
void eval_pressure_helpers(std::span<const double> b, const PressureLaw& p,
                           std::span<double> i_out, std::span<double> j_out,
                           std::span<double> g_out, std::span<double> h_out);

}  // namespace nskr

#endif
