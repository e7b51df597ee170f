#pragma once

#include "sobex/field.hpp"
#include "sobex/lambda_star.hpp"
#include "sobex/levelset.hpp"
#include "sobex/radial.hpp"

#include <string>

namespace sobex {

/// The solved-source scalars the inequality needs, independent of how the
/// extremal was computed.
struct SourceSummary {
    int n = 0;
    double p = 0.0;
    std::string domain_id;
    bool is_ball = false;
    double volume = 0.0;
    double c_p = 0.0;
    double lambda = 0.0;
    double int_pm1 = 0.0; // integral of phi^{p-1}
    double int_p = 0.0;   // integral of phi^p

    static SourceSummary from(const RadialProfile& rp);
    static SourceSummary from(const ScalarField& f);
};

struct IntermediateMargins {
    double comparison_ode4 = 0.0; // (int phi^{p-1})^2 >= V-form bound
    double change_var4 = 0.0;     // n omega_n (int phi^p)^{2(p-1)/p} <= C_p I_rho
    double comparison_ode6 = 0.0; // rho-form of comparison_ode4
    double comparison_ode5 = 0.0; // radial only; NaN otherwise
};

struct InequalityReport {
    // inputs
    int n = 0;
    double p = 0.0;
    std::string domain_id;
    bool is_ball = false;
    double volume = 0.0;
    double c_p = 0.0;         // C_p(D)
    double c_p_star = 0.0;    // C_p(D*), ball of equal volume
    double lambda = 0.0;
    double int_pm1 = 0.0;
    double int_p = 0.0;
    double I_V = 0.0;
    double I_rho = 0.0;
    double lambda_star = 0.0;
    // assembled quantities
    double lhs = 0.0;           // (int phi^{p-1})^2
    double rhs_theorem = 0.0;   // second bracket term with the printed exponent
    double rhs_proof = 0.0;     // second bracket term as the assembly derives it
    double deficit_theorem = 0.0;
    double deficit_proof = 0.0;
    double holder_ub = 0.0;     // |D|^{1/p} (int phi^p)^{(p-1)/p}
    IntermediateMargins intermediate;
};

/// margin = |D|^{1/p} (int phi^p)^{(p-1)/p} - int phi^{p-1} (>= 0).
double holder_check(double int_pm1, double int_p, double volume, double p);

IntermediateMargins intermediate_checks(const SourceSummary& src, const LevelSetData& ls);

InequalityReport evaluate_main_inequality(const SourceSummary& src, const LevelSetData& ls,
                                          const LambdaStarResult& lsr);

} // namespace sobex
