#include "sobex/radial.hpp"

#include "sobex/error.hpp"
#include "sobex/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace sobex {

namespace {

using State = std::array<double, 5>; // psi, psi', K_{p-1}, K_p, K_2

// x^e extended as an odd function (keeps the right-hand side continuous
// across the first zero during bracketing).
inline double odd_pow(double x, double e) {
    if (x >= 0.0)
        return std::pow(x, e);
    return -std::pow(-x, e);
}

inline double pos_pow(double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; }

class Shooter {
public:
    Shooter(int n, double p, double tol) : n_(n), p_(p), rtol_(tol), atol_(tol * 1e-2) {}

    State rhs(double r, const State& y) const {
        const double rn1 = std::pow(r, n_ - 1);
        const double pos = std::max(y[0], 0.0);
        State f;
        f[0] = y[1];
        f[1] = -(n_ - 1) / r * y[1] - odd_pow(y[0], p_ - 1.0);
        f[2] = rn1 * pos_pow(pos, p_ - 1.0);
        f[3] = rn1 * pos_pow(pos, p_);
        f[4] = rn1 * pos * pos;
        return f;
    }

    // Series expansion around the regular singular point r = 0:
    // psi = 1 - r^2/(2n) + (p-1) r^4 / (8n(n+2)) + O(r^6).
    State series_state(double r) const {
        const double a2 = -1.0 / (2.0 * n_);
        const double a4 = (p_ - 1.0) / (8.0 * n_ * (n_ + 2.0));
        State y;
        y[0] = 1.0 + a2 * r * r + a4 * r * r * r * r;
        y[1] = 2.0 * a2 * r + 4.0 * a4 * r * r * r;
        // K_q(r) = r^n/n - q r^{n+2} / (2n(n+2)) + ...
        const double head = std::pow(r, n_) / n_;
        const double corr = std::pow(r, n_ + 2) / (2.0 * n_ * (n_ + 2.0));
        y[2] = head - (p_ - 1.0) * corr;
        y[3] = head - p_ * corr;
        y[4] = head - 2.0 * corr;
        return y;
    }

    // One Dormand-Prince 5(4) attempt; fills ynew and the error estimate.
    void dp_step(double r, const State& y, double h, State& ynew, double& err) const {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                                e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                                e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

        const State k1 = rhs(r, y);
        State t;
        for (int i = 0; i < 5; ++i)
            t[i] = y[i] + h * a21 * k1[i];
        const State k2 = rhs(r + c2 * h, t);
        for (int i = 0; i < 5; ++i)
            t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State k3 = rhs(r + c3 * h, t);
        for (int i = 0; i < 5; ++i)
            t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State k4 = rhs(r + c4 * h, t);
        for (int i = 0; i < 5; ++i)
            t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State k5 = rhs(r + c5 * h, t);
        for (int i = 0; i < 5; ++i)
            t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const State k6 = rhs(r + h, t);
        for (int i = 0; i < 5; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const State k7 = rhs(r + h, ynew);

        err = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double e =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / 5.0);
    }

    // Advance y from r_from to r_to (requires r_to > r_from > 0).
    void integrate_to(State& y, double r_from, double r_to) const {
        double r = r_from;
        double h = std::min(initial_step_, r_to - r_from);
        while (r < r_to) {
            h = std::min(h, r_to - r);
            State ynew;
            double err;
            dp_step(r, y, h, ynew, err);
            const double hmin = 1e-14 * std::max(1.0, r);
            if (err <= 1.0 || h <= hmin) {
                r += h;
                y = ynew;
                const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                h *= std::clamp(grow, 0.2, 5.0);
            } else {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
        }
    }

    double series_radius() const { return 1e-4; }
    double initial_step() const { return initial_step_; }

private:
    int n_;
    double p_;
    double rtol_, atol_;
    double initial_step_ = 1e-3;
};

struct UnitSolution {
    double R0;
    State at_R0;
};

UnitSolution locate_first_zero(const Shooter& sh, double tol, double r_max) {
    const double r0 = sh.series_radius();
    State y = sh.series_state(r0);
    double r = r0;
    double h = 1e-3;
    double r_prev = r;
    State y_prev = y;
    while (r < r_max) {
        h = std::min(h, r_max - r);
        State ynew;
        double err;
        sh.dp_step(r, y, h, ynew, err);
        if (err <= 1.0 || h <= 1e-14 * std::max(1.0, r)) {
            r_prev = r;
            y_prev = y;
            r += h;
            y = ynew;
            const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
            if (y[0] <= 0.0)
                break;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    if (y[0] > 0.0) {
        std::ostringstream msg;
        msg << "no sign change of psi before r_max = " << r_max;
        throw Error(errc::no_zero_found, msg.str());
    }

    // bracket [r_prev, r]; bisect, carrying the state from the left end
    double lo = r_prev, hi = r;
    State ylo = y_prev;
    for (int it = 0; it < 200 && (hi - lo) > 0.25e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        State ym = ylo;
        sh.integrate_to(ym, lo, mid);
        if (ym[0] > 0.0) {
            lo = mid;
            ylo = ym;
        } else {
            hi = mid;
        }
    }
    const double R0 = 0.5 * (lo + hi);
    State yR = ylo;
    if (R0 > lo)
        sh.integrate_to(yR, lo, R0);
    if (std::abs(yR[0]) > tol) {
        std::ostringstream msg;
        msg << "first zero located only to |psi| = " << std::abs(yR[0]);
        throw Error(errc::no_zero_found, msg.str());
    }
    return {R0, yR};
}

} // namespace

UnitProfile shoot_unit_profile(int n, double p, double tol, int samples, double r_max) {
    validate_exponents(n, p);
    if (tol <= 0.0)
        throw Error(errc::config_error, "tolerance must be positive");
    if (samples < 2)
        throw Error(errc::config_error, "need at least 2 samples");

    const Shooter sh(n, p, tol);
    const UnitSolution sol = locate_first_zero(sh, tol, r_max);

    UnitProfile up;
    up.n = n;
    up.p = p;
    up.R0 = sol.R0;
    const int N = samples;
    up.s.resize(N + 1);
    up.psi.resize(N + 1);
    up.dpsi.resize(N + 1);
    up.K_pm1.resize(N + 1);
    up.K_p.resize(N + 1);
    up.K_2.resize(N + 1);

    const double ds = sol.R0 / N;
    State y{1.0, 0.0, 0.0, 0.0, 0.0};
    double r_cur = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double s = i * ds;
        if (i > 0) {
            if (s <= sh.series_radius()) {
                y = sh.series_state(s);
            } else if (r_cur <= sh.series_radius()) {
                y = sh.series_state(sh.series_radius());
                sh.integrate_to(y, sh.series_radius(), s);
            } else {
                sh.integrate_to(y, r_cur, s);
            }
            r_cur = s;
        }
        up.s[i] = s;
        up.psi[i] = (i == N) ? 0.0 : y[0];
        up.dpsi[i] = y[1];
        up.K_pm1[i] = y[2];
        up.K_p[i] = y[3];
        up.K_2[i] = y[4];
    }
    // cumulative integrals at R0 from the zero-location pass are the
    // reference values; the sampled pass agrees to integrator tolerance
    up.K_pm1[N] = sol.at_R0[2];
    up.K_p[N] = sol.at_R0[3];
    up.K_2[N] = sol.at_R0[4];
    return up;
}

double RadialProfile::phi_second(int i) const {
    const double ri = r[i];
    const double ph = std::max(phi[i], 0.0);
    const double nl = lambda * (ph > 0.0 ? std::pow(ph, p - 1.0) : 0.0);
    if (ri == 0.0)
        return -nl / n;
    return -(n - 1) / ri * dphi[i] - nl;
}

RadialProfile solve_radial_profile(int n, double p, double rho_M, double tol, int samples) {
    if (rho_M <= 0.0)
        throw Error(errc::invalid_geometry, "ball radius must be positive");
    const UnitProfile up = shoot_unit_profile(n, p, tol, samples);

    const double wn = unit_ball_volume(n);
    const double Jp = up.K_p.back();
    const double scale = up.R0 / rho_M;
    // A chosen so that the L^p mass is exactly one
    const double A = std::pow(std::pow(scale, n) / (n * wn * Jp), 1.0 / p);

    RadialProfile rp;
    rp.n = n;
    rp.p = p;
    rp.rho_M = rho_M;
    rp.lambda = std::pow(A, 2.0 - p) * scale * scale;
    rp.M = A;

    const size_t N = up.s.size();
    rp.r.resize(N);
    rp.phi.resize(N);
    rp.dphi.resize(N);
    rp.cum_pm1.resize(N);
    const double vol_scale = n * wn * std::pow(rho_M / up.R0, n);
    for (size_t i = 0; i < N; ++i) {
        rp.r[i] = rho_M * up.s[i] / up.R0;
        rp.phi[i] = A * up.psi[i];
        rp.dphi[i] = A * scale * up.dpsi[i];
        rp.cum_pm1[i] = std::pow(A, p - 1.0) * vol_scale * up.K_pm1[i];
    }
    rp.moments[p - 1.0] = std::pow(A, p - 1.0) * vol_scale * up.K_pm1.back();
    rp.moments[p] = std::pow(A, p) * vol_scale * up.K_p.back();
    rp.moments[2.0] = A * A * vol_scale * up.K_2.back();
    rp.c_p = rp.lambda / std::pow(rp.moments[p], (2.0 - p) / p);
    return rp;
}

double sobolev_constant_ball(int n, double p, double rho, double tol) {
    // c_p only needs R0 and the L^p moment; a light sample count suffices
    return solve_radial_profile(n, p, rho, tol, 16).c_p;
}

} // namespace sobex
