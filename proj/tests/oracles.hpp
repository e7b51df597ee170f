#pragma once

// Test-only oracles, independent of the library's solvers:
//  - Bessel J0/J1 by power series, j_{0,1} by bisection on the series
//  - fixed-step classic RK4 shooting for the radial equation

namespace oracle {

double bessel_j0(double x);
double bessel_j1(double x);
double first_j0_zero(); // j_{0,1}

/// First zero of psi'' + ((n-1)/r) psi' + psi^{p-1} = 0, psi(0) = 1,
/// by fixed-step RK4 marching plus bisection on the final step.
double rk4_first_zero(int n, double p, double step = 1e-5);

} // namespace oracle
