#pragma once

#include <span>
#include <vector>

namespace sobex {

/// Minimizer data of the 1-D scale-invariant quotient
///   (int rho^{(1-n)/(p-1)} f'^{p/(p-1)})^{2(p-1)/p} / int rho^{1-n} f^2
/// over f(0) = 0, f'(rho_M) = 0 (f = rho^n g ansatz at the origin).
struct LambdaStarResult {
    int n = 0;
    double p = 0.0;
    double rho_M = 0.0;
    double lambda_star = 0.0;
    double multiplier = 0.0; // Lagrange multiplier of the Euler-Lagrange equation
    double numerator = 0.0;
    double denominator = 0.0;
    double el_residual = 0.0;
    long iterations = 0;
    std::vector<double> rho, f;
};

LambdaStarResult solve_lambda_star(int n, double p, double rho_M, int grid_points = 2048);

/// Max interior residual of d/drho[rho^{(1-n)/(p-1)} f'^{1/(p-1)}] +
/// Lambda rho^{1-n} f, normalized by Lambda * max(rho^{1-n} f).
double euler_lagrange_residual(const LambdaStarResult& res);

double multiplier_scaling_check(const LambdaStarResult& res);

struct PsiTransform {
    std::vector<double> psi;
    double closed_form_gap = 0.0; // vs Lambda^{-1} rho^{(1-n)/(p-1)} f'^{1/(p-1)}
};
PsiTransform psi_transform(const LambdaStarResult& res);

/// Evaluate the generalized quotient on an arbitrary sampled function
/// (ascending rho, rho[0] may be 0). Used to feed H(rho) in as a test
/// function.
double quotient_on_samples(int n, double p, std::span<const double> rho,
                           std::span<const double> f);

struct SandwichGaps {
    double lower_gap = 0.0; // from C_p(D*) <= (n omega_n)^{(p-2)/p} Lambda*
    double upper_gap = 0.0; // from Lambda* <= (n omega_n)^{(2-p)/p} C_p(D*)
};
SandwichGaps sandwich_check(int n, double p, double rho_M, int grid_points = 2048);

} // namespace sobex
