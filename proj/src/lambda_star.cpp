#include "sobex/lambda_star.hpp"

#include "sobex/error.hpp"
#include "sobex/geometry.hpp"
#include "sobex/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sobex {

namespace {

inline double pow_fast(double x, double e) {
    if (e == 1.0)
        return x;
    if (e == 2.0)
        return x * x;
    if (e == 3.0)
        return (x * x) * x;
    if (e == 0.5)
        return std::sqrt(x);
    return std::pow(x, e);
}

// Discrete functionals on the uniform grid rho_j = j*delta:
//   NUM = sum_j c_j d_j^P delta,  d_j = (f_{j+1}-f_j)/delta
//   DEN = delta * sum_j w_j rho_j^{1-n} f_j^2
// with the first cell modeled on f ~ rho^n (keeps both integrands of the
// endpoint singularity unbiased) and f_N tied to f_{N-1}.
struct Discretization {
    int n;
    double p, P, alpha, delta;
    std::vector<double> rho, cw, rho1n, wden, rhon;

    Discretization(int n_, double p_, double rho_M, int N) : n(n_), p(p_) {
        P = p / (p - 1.0);
        alpha = 2.0 * (p - 1.0) / p;
        delta = rho_M / N;
        rho.resize(N + 1);
        rhon.resize(N + 1);
        rho1n.resize(N + 1);
        wden.assign(N + 1, 1.0);
        for (int j = 0; j <= N; ++j) {
            rho[j] = j * delta;
            rhon[j] = std::pow(rho[j], n);
            rho1n[j] = j == 0 ? 0.0 : std::pow(rho[j], 1 - n);
        }
        wden[0] = 0.0;
        wden[1] = 0.5 + 1.0 / (n + 2); // power-law first interval
        wden[N] = 0.5;
        cw.resize(N);
        cw[0] = std::pow(double(n), P - 1.0) * std::pow(delta, (1.0 - n) * (P - 1.0));
        for (int j = 1; j < N; ++j)
            cw[j] = std::pow((j + 0.5) * delta, (1.0 - n) / (p - 1.0));
    }

    int cells() const { return static_cast<int>(cw.size()); }

    double num(const std::vector<double>& f) const {
        const int N = cells();
        double acc = 0.0;
        for (int j = 0; j < N; ++j) {
            const double d = std::max((f[j + 1] - f[j]) / delta, 0.0);
            acc += cw[j] * pow_fast(d, P);
        }
        return acc * delta;
    }

    double den(const std::vector<double>& f) const {
        const int N = cells();
        double acc = 0.0;
        for (int j = 1; j <= N; ++j)
            acc += wden[j] * rho1n[j] * f[j] * f[j];
        return acc * delta;
    }

};

} // namespace

LambdaStarResult solve_lambda_star(int n, double p, double rho_M, int grid_points) {
    validate_exponents(n, p);
    if (rho_M <= 0.0)
        throw Error(errc::invalid_geometry, "rho_M must be positive");
    if (grid_points < 64)
        throw Error(errc::config_error, "need at least 64 grid points");

    const int N = grid_points;
    const Discretization ds(n, p, rho_M, N);

    // Flux fixed-point iteration. Integrating the divergence-form
    // equation once from rho to rho_M (zero flux at the right end) gives
    //   rho^{(1-n)/(p-1)} f'^{1/(p-1)} = psi,  psi(rho) = int_rho^{rho_M} s^{1-n} f ds,
    // so each sweep rebuilds f from f' = psi^{p-1} rho^{n-1} and
    // renormalizes. Both boundary conditions and the monotone cone hold
    // at every iterate; convergence is power-method-like.
    std::vector<double> f(N + 1), psi(N + 1), integ(N + 1);
    for (int j = 0; j <= N; ++j)
        f[j] = ds.rhon[j];

    double q = 0.0, q_prev = 0.0;
    long iter = 0;
    const long max_iters = 100000;
    bool converged = false;
    for (; iter < max_iters; ++iter) {
        const double dv = ds.den(f);
        if (!(dv > 0.0))
            throw Error(errc::nonconvergence, "iterate collapsed");
        const double s = 1.0 / std::sqrt(dv);
        for (double& x : f)
            x *= s;

        for (int j = 0; j <= N; ++j)
            integ[j] = ds.rho1n[j] * f[j];
        psi[N] = 0.0;
        for (int j = N - 1; j >= 0; --j)
            psi[j] = psi[j + 1] + 0.5 * (integ[j] + integ[j + 1]) * ds.delta;
        for (int j = 0; j <= N; ++j)
            integ[j] = pow_fast(psi[j], p - 1.0) * std::pow(ds.rho[j], n - 1.0);
        f[0] = 0.0;
        for (int j = 1; j <= N; ++j)
            f[j] = f[j - 1] + 0.5 * (integ[j - 1] + integ[j]) * ds.delta;

        q = std::pow(ds.num(f), ds.alpha) / ds.den(f);
        if (iter > 0 && std::abs(q - q_prev) < 1e-15 * q) {
            converged = true;
            break;
        }
        q_prev = q;
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "no settled quotient in " << max_iters << " sweeps, best " << q;
        throw Error(errc::nonconvergence, msg.str());
    }

    {
        const double dv = ds.den(f);
        const double s = 1.0 / std::sqrt(dv);
        for (double& x : f)
            x *= s;
    }
    const double numv = ds.num(f);
    const double denv = ds.den(f);

    LambdaStarResult res;
    res.n = n;
    res.p = p;
    res.rho_M = rho_M;
    res.rho = ds.rho;
    res.f = f;
    res.numerator = numv;
    res.denominator = denv;
    res.lambda_star = std::pow(numv, ds.alpha) / denv;
    res.multiplier = numv / denv; // discrete Rayleigh identity for the EL operator
    res.iterations = iter;
    res.el_residual = euler_lagrange_residual(res);
    return res;
}

double euler_lagrange_residual(const LambdaStarResult& res) {
    const int N = static_cast<int>(res.f.size()) - 1;
    const Discretization ds(res.n, res.p, res.rho_M, N);
    std::vector<double> flux(N, 0.0);
    for (int j = 0; j < N; ++j) {
        const double d = std::max((res.f[j + 1] - res.f[j]) / ds.delta, 0.0);
        flux[j] = ds.cw[j] * pow_fast(d, ds.P - 1.0);
    }
    double scale = 0.0;
    for (int j = 1; j <= N; ++j)
        scale = std::max(scale, ds.rho1n[j] * res.f[j]);
    scale *= res.multiplier;
    double worst = 0.0;
    for (int j = 2; j <= N - 2; ++j) {
        const double div = (flux[j] - flux[j - 1]) / ds.delta;
        const double r = div + res.multiplier * ds.rho1n[j] * res.f[j];
        worst = std::max(worst, std::abs(r));
    }
    return worst / scale;
}

double multiplier_scaling_check(const LambdaStarResult& res) {
    const double rhs = res.lambda_star * std::pow(res.numerator, (2.0 - res.p) / res.p);
    return std::abs(res.multiplier - rhs) / res.multiplier;
}

PsiTransform psi_transform(const LambdaStarResult& res) {
    const int N = static_cast<int>(res.f.size()) - 1;
    const double delta = res.rho_M / N;
    PsiTransform out;
    out.psi.assign(N + 1, 0.0);
    std::vector<double> integrand(N + 1, 0.0);
    for (int j = 1; j <= N; ++j)
        integrand[j] = std::pow(res.rho[j], 1 - res.n) * res.f[j];
    for (int j = N - 1; j >= 0; --j)
        out.psi[j] = out.psi[j + 1] + 0.5 * (integrand[j] + integrand[j + 1]) * delta;

    double worst = 0.0, scale = 0.0;
    const double em = 1.0 / (res.p - 1.0);
    for (int j = 1; j < N; ++j) {
        const double fp = (res.f[j + 1] - res.f[j - 1]) / (2.0 * delta);
        if (fp < 0.0)
            continue;
        const double closed =
            std::pow(res.rho[j], (1.0 - res.n) * em) * std::pow(fp, em) / res.multiplier;
        worst = std::max(worst, std::abs(out.psi[j] - closed));
        scale = std::max(scale, std::abs(out.psi[j]));
    }
    out.closed_form_gap = scale > 0.0 ? worst / scale : 0.0;
    return out;
}

double quotient_on_samples(int n, double p, std::span<const double> rho,
                           std::span<const double> f) {
    if (rho.size() != f.size() || rho.size() < 3)
        throw Error(errc::inconsistent_inputs, "need matching rho/f samples");
    const double P = p / (p - 1.0);
    const double alpha = 2.0 * (p - 1.0) / p;
    const size_t m = rho.size();
    double num = 0.0, den = 0.0;
    for (size_t j = 0; j + 1 < m; ++j) {
        const double dr = rho[j + 1] - rho[j];
        if (dr <= 0.0)
            throw Error(errc::inconsistent_inputs, "rho samples must be increasing");
        const double d = std::max((f[j + 1] - f[j]) / dr, 0.0);
        double c;
        if (j == 0 && rho[0] == 0.0)
            c = std::pow(double(n), P - 1.0) * std::pow(dr, (1.0 - n) * (P - 1.0));
        else
            c = std::pow(0.5 * (rho[j] + rho[j + 1]), (1.0 - n) / (p - 1.0));
        num += c * pow_fast(d, P) * dr;
    }
    for (size_t j = 0; j + 1 < m; ++j) {
        const double dr = rho[j + 1] - rho[j];
        const double g1 = rho[j] > 0.0 ? std::pow(rho[j], 1 - n) * f[j] * f[j] : 0.0;
        const double g2 = std::pow(rho[j + 1], 1 - n) * f[j + 1] * f[j + 1];
        if (j == 0 && rho[0] == 0.0)
            den += dr * g2 / (n + 2);
        else
            den += 0.5 * (g1 + g2) * dr;
    }
    if (den <= 0.0)
        throw Error(errc::undefined_quotient, "test function vanishes");
    return std::pow(num, alpha) / den;
}

SandwichGaps sandwich_check(int n, double p, double rho_M, int grid_points) {
    const double cp = sobolev_constant_ball(n, p, rho_M);
    const double ls = solve_lambda_star(n, p, rho_M, grid_points).lambda_star;
    const double nw = n * unit_ball_volume(n);
    SandwichGaps g;
    g.upper_gap = (std::pow(nw, (2.0 - p) / p) * cp - ls) / ls;
    g.lower_gap = (std::pow(nw, (p - 2.0) / p) * ls - cp) / cp;
    return g;
}

} // namespace sobex
