#include "sobex/levelset.hpp"

#include "sobex/error.hpp"
#include "sobex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sobex {

namespace {

// cubic Hermite on [0, 1]
inline double hermite(double s, double f0, double d0, double f1, double d1, double dx) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * dx * d0 + (-2 * s3 + 3 * s2) * f1 +
           (s3 - s2) * dx * d1;
}

inline double hermite_deriv(double s, double f0, double d0, double f1, double d1, double dx) {
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * dx * d0 + (-6 * s2 + 6 * s) * f1 +
            (3 * s2 - 2 * s) * dx * d1) /
           dx;
}

// invert the monotone decreasing profile on interval i: phi(r) = t
double invert_on_interval(const RadialProfile& rp, size_t i, double t) {
    const double dx = rp.r[i + 1] - rp.r[i];
    const double f0 = rp.phi[i], f1 = rp.phi[i + 1];
    const double d0 = rp.dphi[i], d1 = rp.dphi[i + 1];
    double lo = 0.0, hi = 1.0;
    double s = (f0 - t) / std::max(f0 - f1, std::numeric_limits<double>::min());
    s = std::clamp(s, 0.0, 1.0);
    for (int it = 0; it < 60; ++it) {
        const double val = hermite(s, f0, d0, f1, d1, dx) - t;
        if (val > 0.0)
            lo = s;
        else
            hi = s;
        const double der = hermite_deriv(s, f0, d0, f1, d1, dx);
        double snew = (der != 0.0) ? s - val / der : 0.5 * (lo + hi);
        if (!(snew > lo && snew < hi))
            snew = 0.5 * (lo + hi);
        if (std::abs(snew - s) < 1e-15)
            return snew;
        s = snew;
    }
    return s;
}

} // namespace

LevelSetData build_levelsets(const RadialProfile& rp, int num_levels) {
    if (rp.phi.empty() || rp.M <= 0.0)
        throw Error(errc::no_solution, "radial profile is not solved");
    if (num_levels < 2)
        throw Error(errc::config_error, "need at least 2 levels");

    const int n = rp.n;
    const double wn = unit_ball_volume(n);
    LevelSetData ls;
    ls.n = n;
    ls.p = rp.p;
    ls.M = rp.M;
    ls.total_volume = wn * std::pow(rp.rho_M, n);
    ls.radial = true;
    ls.num_levels = num_levels;
    ls.samples.resize(num_levels + 1);

    const size_t last = rp.r.size() - 1;
    size_t seg = 0; // profile interval; advances as t decreases
    for (int k = 0; k <= num_levels; ++k) {
        LevelSample& smp = ls.samples[k];
        const double t =
            (k == 0) ? rp.M : (k == num_levels ? 0.0 : rp.M * (double(num_levels - k) / num_levels));
        smp.t = t;
        if (k == 0) {
            smp.grad = 0.0; // r = 0, V = H = perim = 0
            continue;
        }
        double r, H, grad;
        if (k == num_levels) {
            r = rp.rho_M;
            H = rp.cum_pm1[last];
            grad = std::abs(rp.dphi[last]);
        } else {
            while (seg + 1 < last && rp.phi[seg + 1] >= t)
                ++seg;
            const double s = invert_on_interval(rp, seg, t);
            const double dx = rp.r[seg + 1] - rp.r[seg];
            r = rp.r[seg] + s * dx;
            const double g0 = n * wn * std::pow(rp.r[seg], n - 1) *
                              std::pow(std::max(rp.phi[seg], 0.0), rp.p - 1.0);
            const double g1 = n * wn * std::pow(rp.r[seg + 1], n - 1) *
                              std::pow(std::max(rp.phi[seg + 1], 0.0), rp.p - 1.0);
            H = hermite(s, rp.cum_pm1[seg], g0, rp.cum_pm1[seg + 1], g1, dx);
            grad = std::abs(hermite(s, rp.dphi[seg], rp.phi_second(static_cast<int>(seg)),
                                    rp.dphi[seg + 1], rp.phi_second(static_cast<int>(seg + 1)),
                                    dx));
        }
        smp.rho = r;
        smp.V = wn * std::pow(r, n);
        smp.H = H;
        smp.perim = n * wn * std::pow(r, n - 1);
        smp.grad = grad;
    }
    return ls;
}

namespace {

// marching squares over the padded raster; returns total contour length
// in physical units and the segment count
std::pair<double, long> contour_length(const ScalarField& f, double t) {
    const std::ptrdiff_t stride = f.stride();
    const int nx = f.mask.nx + 2, ny = f.mask.ny + 2; // node lattice incl. ring
    const double* u = f.values.data();
    double len = 0.0;
    long segs = 0;
    auto frac = [t](double a, double b) { return (t - a) / (b - a); };
    for (int j = 0; j + 1 < ny; ++j) {
        const double* row0 = u + static_cast<std::ptrdiff_t>(j) * stride;
        const double* row1 = row0 + stride;
        for (int i = 0; i + 1 < nx; ++i) {
            const double v00 = row0[i], v10 = row0[i + 1];
            const double v01 = row1[i], v11 = row1[i + 1];
            int code = 0;
            if (v00 > t) code |= 1;
            if (v10 > t) code |= 2;
            if (v11 > t) code |= 4;
            if (v01 > t) code |= 8;
            if (code == 0 || code == 15)
                continue;
            // edge crossings: bottom (v00-v10), right (v10-v11),
            // top (v01-v11), left (v00-v01)
            const double xb = frac(v00, v10), yr = frac(v10, v11);
            const double xt = frac(v01, v11), yl = frac(v00, v01);
            auto seg = [&](double x0, double y0, double x1, double y1) {
                len += std::hypot(x1 - x0, y1 - y0);
                ++segs;
            };
            switch (code) {
            case 1: case 14: seg(0.0, yl, xb, 0.0); break;
            case 2: case 13: seg(xb, 0.0, 1.0, yr); break;
            case 4: case 11: seg(1.0, yr, xt, 1.0); break;
            case 8: case 7: seg(xt, 1.0, 0.0, yl); break;
            case 3: case 12: seg(0.0, yl, 1.0, yr); break;
            case 6: case 9: seg(xb, 0.0, xt, 1.0); break;
            case 5: case 10: {
                // saddle: resolve by the cell-center average
                const double c = 0.25 * (v00 + v10 + v01 + v11);
                const bool joined = (c > t) == (code == 5);
                if (joined == (code == 5)) {
                    seg(0.0, yl, xb, 0.0);
                    seg(xt, 1.0, 1.0, yr);
                } else {
                    seg(xb, 0.0, 1.0, yr);
                    seg(0.0, yl, xt, 1.0);
                }
                break;
            }
            default: break;
            }
        }
    }
    return {len * f.mask.h, segs};
}

} // namespace

LevelSetData build_levelsets(const ScalarField& f, int num_levels) {
    if (f.values.empty())
        throw Error(errc::no_solution, "field is not solved");
    if (num_levels < 2)
        throw Error(errc::config_error, "need at least 2 levels");

    std::vector<double> vals;
    vals.reserve(f.mask.count);
    for (int j = 0; j < f.mask.ny; ++j)
        for (int i = 0; i < f.mask.nx; ++i)
            if (f.mask.at(i, j))
                vals.push_back(f.at(i, j));
    std::sort(vals.begin(), vals.end(), std::greater<>());
    const double M = vals.front();
    if (M <= 0.0)
        throw Error(errc::no_solution, "field vanishes on the mask");

    long distinct = 1;
    for (size_t i = 1; i < vals.size(); ++i)
        if (vals[i] != vals[i - 1])
            ++distinct;
    // staircase guard: at most distinct/4 levels
    const int K = static_cast<int>(std::min<long>(num_levels, std::max<long>(2, distinct / 4)));

    std::vector<double> prefix(vals.size() + 1, 0.0);
    for (size_t i = 0; i < vals.size(); ++i)
        prefix[i + 1] = prefix[i] + std::pow(vals[i], f.p - 1.0);

    const double h2 = f.mask.h * f.mask.h;
    const double wn = unit_ball_volume(2);
    LevelSetData ls;
    ls.n = 2;
    ls.p = f.p;
    ls.M = M;
    ls.total_volume = f.mask.area();
    ls.cell_area = h2;
    ls.radial = false;
    ls.num_levels = K;
    ls.samples.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        LevelSample& smp = ls.samples[k];
        const double t = (k == 0) ? M : (k == K ? 0.0 : M * (double(K - k) / K));
        smp.t = t;
        // strict count of vals > t in the descending array (ties excluded)
        const auto pos = std::lower_bound(vals.begin(), vals.end(), t, std::greater<>());
        const size_t cnt = static_cast<size_t>(pos - vals.begin());
        smp.V = cnt * h2;
        smp.H = prefix[cnt] * h2;
        smp.rho = std::pow(smp.V / wn, 0.5);
        smp.grad = std::numeric_limits<double>::quiet_NaN();
        if (k == 0) {
            smp.perim = 0.0;
            continue;
        }
        const auto [len, segs] = contour_length(f, t);
        if (segs == 0) {
            smp.perim = -1.0;
            ++ls.dropped_perimeter_levels;
        } else {
            smp.perim = len;
        }
    }
    return ls;
}

double dhdv_check(const LevelSetData& ls) {
    const double scale = std::pow(ls.M, ls.p - 1.0);
    double worst = 0.0;
    for (size_t k = 1; k + 1 < ls.samples.size(); ++k) {
        const double dV = ls.samples[k + 1].V - ls.samples[k - 1].V;
        if (dV == 0.0)
            continue;
        const double dH = ls.samples[k + 1].H - ls.samples[k - 1].H;
        const double expected = std::pow(ls.samples[k].t, ls.p - 1.0);
        worst = std::max(worst, std::abs(dH / dV - expected) / scale);
    }
    return worst;
}

RhoParam rho_parameterization(const LevelSetData& ls) {
    RhoParam rp;
    rp.rho.reserve(ls.samples.size());
    rp.H.reserve(ls.samples.size());
    for (const auto& s : ls.samples) {
        if (!rp.rho.empty() && s.rho <= rp.rho.back())
            continue; // grid staircase duplicates
        rp.rho.push_back(s.rho);
        rp.H.push_back(s.H);
    }
    const size_t m = rp.rho.size();
    rp.dHdrho.assign(m, 0.0);
    if (m < 2)
        return rp;
    for (size_t k = 1; k + 1 < m; ++k) {
        const double h1 = rp.rho[k] - rp.rho[k - 1];
        const double h2 = rp.rho[k + 1] - rp.rho[k];
        rp.dHdrho[k] = -h2 / (h1 * (h1 + h2)) * rp.H[k - 1] +
                       (h2 - h1) / (h1 * h2) * rp.H[k] +
                       h1 / (h2 * (h1 + h2)) * rp.H[k + 1];
    }
    rp.dHdrho[0] = 0.0; // H ~ rho^n near 0 for n >= 2... derivative -> 0
    rp.dHdrho[m - 1] = (rp.H[m - 1] - rp.H[m - 2]) / (rp.rho[m - 1] - rp.rho[m - 2]);
    return rp;
}

double isoperimetric_check(const LevelSetData& ls) {
    const double wn = unit_ball_volume(ls.n);
    const double denom_const = ls.n * ls.n * std::pow(wn, 2.0 / ls.n);
    // super-level sets spanning fewer than ~500 cells are raster limited:
    // the lattice count noise alone exceeds the isoperimetric slack
    const double v_floor = ls.radial ? 0.0 : 512.0 * ls.cell_area;
    double worst = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& s : ls.samples) {
        if (s.perim <= 0.0 || s.V <= 0.0 || s.V < v_floor)
            continue;
        const double ratio = s.perim * s.perim /
                             (denom_const * std::pow(s.V, 2.0 * (ls.n - 1) / ls.n));
        worst = std::min(worst, ratio);
        any = true;
    }
    if (!any)
        throw Error(errc::unsupported_source, "no usable perimeter levels");
    return worst;
}

double h_flux_integral(const LevelSetData& ls) {
    const RhoParam rp = rho_parameterization(ls);
    const double ex_w = (1.0 - ls.n) / (ls.p - 1.0);
    const double ex_d = ls.p / (ls.p - 1.0);
    double acc = 0.0;
    double prev_g = 0.0, prev_rho = 0.0;
    for (size_t k = 0; k < rp.rho.size(); ++k) {
        double g = 0.0;
        if (rp.rho[k] > 0.0) {
            const double d = std::max(rp.dHdrho[k], 0.0);
            g = std::pow(rp.rho[k], ex_w) * std::pow(d, ex_d);
        }
        if (k > 0)
            acc += 0.5 * (g + prev_g) * (rp.rho[k] - prev_rho);
        prev_g = g;
        prev_rho = rp.rho[k];
    }
    return acc;
}

double change_var3_identity(const LevelSetData& ls, double phi_p_integral) {
    const double wn = unit_ball_volume(ls.n);
    const double target = std::pow(ls.n * wn, 1.0 / (ls.p - 1.0)) * phi_p_integral;
    return std::abs(h_flux_integral(ls) - target) / target;
}

HSquareIntegrals h_square_integrals(const LevelSetData& ls) {
    const RhoParam rp = rho_parameterization(ls);
    double acc = 0.0;
    double prev_g = 0.0, prev_rho = 0.0;
    for (size_t k = 0; k < rp.rho.size(); ++k) {
        double g = 0.0;
        if (rp.rho[k] > 0.0)
            g = std::pow(rp.rho[k], 1.0 - ls.n) * rp.H[k] * rp.H[k];
        if (k > 0)
            acc += 0.5 * (g + prev_g) * (rp.rho[k] - prev_rho);
        prev_g = g;
        prev_rho = rp.rho[k];
    }
    const double wn = unit_ball_volume(ls.n);
    HSquareIntegrals out;
    out.I_rho = acc;
    // exact change of variables V = omega_n rho^n applied to the same
    // quadrature nodes
    out.I_V = ls.n * std::pow(wn, (2.0 - ls.n) / ls.n) * acc;
    return out;
}

double flux_identity_check(const LevelSetData& ls, double lambda) {
    if (!ls.radial)
        throw Error(errc::unsupported_source, "flux identity needs a radial source");
    const double H0 = ls.samples.back().H;
    double worst = 0.0;
    for (size_t k = 1; k + 1 < ls.samples.size(); ++k) {
        const auto& s = ls.samples[k];
        if (s.H < 1e-8 * H0)
            continue;
        const double lhs = lambda * s.H;
        const double rhs = s.perim * s.grad;
        worst = std::max(worst, std::abs(lhs - rhs) / lhs);
    }
    return worst;
}

} // namespace sobex
