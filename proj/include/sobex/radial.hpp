#pragma once

#include <map>
#include <vector>

namespace sobex {

/// Canonical profile of psi'' + ((n-1)/r) psi' + psi^{p-1} = 0 with
/// psi(0) = 1, psi'(0) = 0, sampled uniformly on [0, R0] where R0 is the
/// first zero. K_q holds cumulative integrals of s^{n-1} psi^q.
struct UnitProfile {
    int n = 0;
    double p = 0.0;
    double R0 = 0.0;
    std::vector<double> s, psi, dpsi;
    std::vector<double> K_pm1, K_p, K_2;
};

UnitProfile shoot_unit_profile(int n, double p, double tol = 1e-12, int samples = 10000,
                               double r_max = 1000.0);

/// Extremal profile on the ball B_{rho_M}, normalized so moments[p] = 1
/// (which makes lambda and c_p coincide).
struct RadialProfile {
    int n = 0;
    double p = 0.0;
    double rho_M = 0.0;
    double lambda = 0.0;
    double c_p = 0.0;
    double M = 0.0; // phi(0) = sup phi
    std::vector<double> r, phi, dphi;
    std::vector<double> cum_pm1; // integral of phi^{p-1} over B_{r[i]}
    std::map<double, double> moments; // q -> integral of phi^q over the ball

    double moment(double q) const { return moments.at(q); }
    /// phi'' from the equation itself (removable singularity at r = 0).
    double phi_second(int i) const;
};

RadialProfile solve_radial_profile(int n, double p, double rho_M, double tol = 1e-12,
                                   int samples = 10000);

/// C_p(B_rho) = lambda of the profile normalized to unit L^p mass.
double sobolev_constant_ball(int n, double p, double rho = 1.0, double tol = 1e-12);

} // namespace sobex
