#pragma once

namespace lisg {

/// Modified Bessel function of the second kind K_nu(x) for real order
/// nu >= 0 and x > 0. Underflows to 0 for large x.
double bessel_k(double nu, double x);

}  // namespace lisg
