#pragma once

#include "sobex/field.hpp"
#include "sobex/radial.hpp"

#include <vector>

namespace sobex {

struct LevelSample {
    double t = 0.0;
    double V = 0.0;     // |{phi > t}|
    double H = 0.0;     // integral of phi^{p-1} over {phi > t}
    double rho = 0.0;   // volume radius (V / omega_n)^{1/n}
    double perim = -1.0; // |Sigma_t|; negative when unavailable
    double grad = 0.0;   // |grad phi| on Sigma_t (radial sources only)
};

/// Distribution-function data of a solved source, sampled at levels
/// uniform in t. samples[0] is t = M (empty set), samples.back() is t = 0.
struct LevelSetData {
    int n = 0;
    double p = 0.0;
    double M = 0.0;
    double total_volume = 0.0;
    double cell_area = 0.0; // h^2 for grid sources, 0 for radial
    bool radial = false;
    int num_levels = 0;              // intervals; samples.size() == num_levels + 1
    int dropped_perimeter_levels = 0; // grid levels with no contour segments
    std::vector<LevelSample> samples;
};

LevelSetData build_levelsets(const RadialProfile& rp, int num_levels);
LevelSetData build_levelsets(const ScalarField& f, int num_levels);

/// max_k | dH/dV - t_k^{p-1} | / M^{p-1} over interior levels (centered
/// differences in V).
double dhdv_check(const LevelSetData& ls);

struct RhoParam {
    std::vector<double> rho, H, dHdrho; // ascending rho, deduplicated
};
RhoParam rho_parameterization(const LevelSetData& ls);

/// min over usable levels of |Sigma_t|^2 / (n^2 omega_n^{2/n} V^{2(n-1)/n}).
double isoperimetric_check(const LevelSetData& ls);

/// Relative gap between the rho-form integral of (dH/drho)^{p/(p-1)} and
/// (n omega_n)^{1/(p-1)} * int phi^p.
double change_var3_identity(const LevelSetData& ls, double phi_p_integral);

struct HSquareIntegrals {
    double I_V = 0.0;   // int V^{2(1-n)/n} H^2 dV
    double I_rho = 0.0; // int rho^{1-n} H^2 drho
};
HSquareIntegrals h_square_integrals(const LevelSetData& ls);

/// LHS integral of the rho-form inequality (same integrand as
/// change_var3); exposed for the integral-inequality margins.
double h_flux_integral(const LevelSetData& ls);

/// Radial sources: max relative gap in lambda H(t) = |Sigma_t| |grad phi|
/// (divergence identity; equality case of the Cauchy-Schwarz step).
double flux_identity_check(const LevelSetData& ls, double lambda);

} // namespace sobex
