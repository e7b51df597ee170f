#include "sobex/field.hpp"

#include "sobex/error.hpp"
#include "sobex/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sobex {

namespace {

double pow_nonneg(double x, double e) {
    if (e == 1.0)
        return x;
    if (e == 2.0)
        return x * x;
    if (e == 3.0)
        return (x * x) * x;
    return std::pow(x, e);
}

// padded companion rasters for the kernels: 1/0 mask and the per-cell
// count of exterior edges (face-Dirichlet correction)
struct Companions {
    std::vector<double> maskf;
    std::vector<double> bc;
};

Companions make_companions(const Mask& m) {
    const std::ptrdiff_t stride = m.nx + 2;
    Companions c;
    c.maskf.assign(static_cast<size_t>(stride) * (m.ny + 2), 0.0);
    c.bc.assign(static_cast<size_t>(stride) * (m.ny + 2), 0.0);
    for (int j = 0; j < m.ny; ++j) {
        for (int i = 0; i < m.nx; ++i) {
            if (!m.at(i, j))
                continue;
            const size_t idx = static_cast<size_t>(j + 1) * stride + (i + 1);
            c.maskf[idx] = 1.0;
            int b = 0;
            b += (i == 0 || !m.at(i - 1, j)) ? 1 : 0;
            b += (i == m.nx - 1 || !m.at(i + 1, j)) ? 1 : 0;
            b += (j == 0 || !m.at(i, j - 1)) ? 1 : 0;
            b += (j == m.ny - 1 || !m.at(i, j + 1)) ? 1 : 0;
            c.bc[idx] = b;
        }
    }
    return c;
}

} // namespace

Mask rasterize(const Domain& d, double h) {
    if (d.n != 2)
        throw Error(errc::unsupported_source, "rasterize requires a 2-D domain");
    if (h <= 0.0)
        throw Error(errc::config_error, "grid spacing must be positive");
    const auto bb = d.bounding_box();
    Mask m;
    m.h = h;
    m.x0 = bb[0];
    m.y0 = bb[1];
    m.nx = std::max(1, static_cast<int>(std::ceil((bb[2] - bb[0]) / h - 1e-12)));
    m.ny = std::max(1, static_cast<int>(std::ceil((bb[3] - bb[1]) / h - 1e-12)));
    m.inside.assign(static_cast<size_t>(m.nx) * m.ny, 0);
    for (int j = 0; j < m.ny; ++j) {
        const double y = m.y0 + (j + 0.5) * h;
        for (int i = 0; i < m.nx; ++i) {
            const double x = m.x0 + (i + 0.5) * h;
            if (d.contains(x, y)) {
                m.inside[static_cast<size_t>(j) * m.nx + i] = 1;
                ++m.count;
            }
        }
    }
    if (m.count == 0) {
        std::ostringstream msg;
        msg << "no cell centers inside " << d.id() << " at h = " << h;
        throw Error(errc::resolution_too_coarse, msg.str());
    }
    return m;
}

double ScalarField::max_value() const {
    double mx = 0.0;
    for (double v : values)
        mx = std::max(mx, v);
    return mx;
}

double ScalarField::integral_pow(double q) const {
    const auto& k = kernels::active_ops();
    const double s = k.sum_pow(values.data(), mask.nx, mask.ny, stride(), q);
    return s * mask.h * mask.h;
}

double quotient_value(const ScalarField& f, double p) {
    const auto& k = kernels::active_ops();
    const Companions c = make_companions(f.mask);
    const double denom_sum = k.sum_pow(f.values.data(), f.mask.nx, f.mask.ny, f.stride(), p);
    if (denom_sum <= 0.0)
        throw Error(errc::undefined_quotient, "field vanishes identically");
    const double energy =
        k.dirichlet_energy(f.values.data(), c.bc.data(), f.mask.nx, f.mask.ny, f.stride());
    const double h2 = f.mask.h * f.mask.h;
    return energy / std::pow(denom_sum * h2, 2.0 / p);
}

ScalarField minimize_quotient(const Mask& mask, double p, const FlowParams& fp) {
    if (p <= 1.0)
        throw Error(errc::subcriticality_violation, "p must exceed 1");
    if (mask.count == 0)
        throw Error(errc::resolution_too_coarse, "empty mask");
    if (fp.quotient_tol <= 0.0)
        throw Error(errc::config_error, "quotient_tol must be positive");

    const auto& k = kernels::active_ops();
    const std::ptrdiff_t stride = mask.nx + 2;
    const size_t padded = static_cast<size_t>(stride) * (mask.ny + 2);
    const Companions comp = make_companions(mask);
    const double h = mask.h;
    const double h2 = h * h;
    const double inv_h2 = 1.0 / h2;
    const double dt_cap = h2 / 6.0; // diagonal grows to (4+2b)/h^2 with the face correction
    double dt = (fp.dt > 0.0) ? std::min(fp.dt, h2 / 4.0) : dt_cap;

    ScalarField f;
    f.mask = mask;
    f.p = p;
    f.values.assign(padded, 0.0);

    if (fp.init != nullptr) {
        if (fp.init->mask.nx != mask.nx || fp.init->mask.ny != mask.ny)
            throw Error(errc::inconsistent_inputs, "warm-start field has a different mask");
        f.values = fp.init->values;
        for (size_t i = 0; i < padded; ++i)
            f.values[i] = std::max(f.values[i], 0.0) * comp.maskf[i];
    } else {
        // product of distances to the bounding box edges
        const double lx = mask.nx * h, ly = mask.ny * h;
        for (int j = 0; j < mask.ny; ++j) {
            const double y = (j + 0.5) * h;
            for (int i = 0; i < mask.nx; ++i) {
                if (!mask.at(i, j))
                    continue;
                const double x = (i + 0.5) * h;
                f.values[static_cast<size_t>(j + 1) * stride + (i + 1)] =
                    x * (lx - x) * y * (ly - y);
            }
        }
    }

    const double s0 = k.sum_pow(f.values.data(), mask.nx, mask.ny, stride, p);
    if (s0 <= 0.0)
        throw Error(errc::flow_stalled, "initial field vanishes on the mask");
    k.scale(f.values.data(), static_cast<std::ptrdiff_t>(padded),
            1.0 / std::pow(s0 * h2, 1.0 / p));

    std::vector<double> next(padded, 0.0);
    std::vector<double> prev(padded, 0.0);
    // lagged multiplier: the update uses the previous step's quotient,
    // which flow_step confirms (it returns the energy of its input)
    double lam = k.dirichlet_energy(f.values.data(), comp.bc.data(), mask.nx, mask.ny, stride);
    double q_prev = 0.0;
    bool have_prev = false;
    long iter = 0;
    int clean_steps = 0;
    bool converged = false;

    for (; iter < fp.max_iters; ++iter) {
        const auto st = k.flow_step(f.values.data(), comp.maskf.data(), comp.bc.data(),
                                    next.data(), mask.nx, mask.ny, stride, inv_h2, dt, lam,
                                    p - 1.0, p);
        const double q = st.energy_u; // quotient of the (normalized) current field
        if (have_prev && q > q_prev * (1.0 + 1e-13)) {
            f.values = prev; // reject the previous step, halve dt
            dt *= 0.5;
            clean_steps = 0;
            have_prev = false;
            if (dt < 1e-6 * dt_cap) {
                std::ostringstream msg;
                msg << "flow stalled at quotient " << q_prev;
                throw Error(errc::flow_stalled, msg.str());
            }
            lam = q_prev;
            continue;
        }
        if (have_prev && std::abs(q - q_prev) < fp.quotient_tol * std::abs(q)) {
            converged = true;
            break;
        }
        if (st.sumpow_v <= 0.0)
            throw Error(errc::flow_stalled, "flow collapsed to the zero field");
        prev.swap(f.values);
        f.values.swap(next);
        k.scale(f.values.data(), static_cast<std::ptrdiff_t>(padded),
                1.0 / std::pow(st.sumpow_v * h2, 1.0 / p));
        if (fp.trace != nullptr)
            fp.trace->push_back(q);
        q_prev = q;
        lam = q;
        have_prev = true;
        if (++clean_steps > 500 && dt < dt_cap) {
            dt = std::min(dt_cap, dt * 1.25);
            clean_steps = 0;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "no convergence in " << fp.max_iters << " iterations, last quotient " << q_prev;
        throw Error(errc::flow_stalled, msg.str());
    }

    f.iterations = iter;
    f.quotient = quotient_value(f, p);
    const double sp = f.integral_pow(p);
    f.lambda = f.quotient * std::pow(sp, (2.0 - p) / p);
    return f;
}

double pde_residual(const ScalarField& f, double lambda, double p) {
    const Companions comp = make_companions(f.mask);
    const std::ptrdiff_t stride = f.stride();
    const double inv_h2 = 1.0 / (f.mask.h * f.mask.h);
    const double mx = f.max_value();
    if (mx <= 0.0 || lambda == 0.0)
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (int j = 0; j < f.mask.ny; ++j) {
        for (int i = 0; i < f.mask.nx; ++i) {
            if (!f.mask.at(i, j))
                continue;
            const size_t c = static_cast<size_t>(j + 1) * stride + (i + 1);
            const double u = f.values[c];
            const double lap = ((f.values[c - 1] + f.values[c + 1]) +
                                (f.values[c - stride] + f.values[c + stride]) -
                                (4.0 + comp.bc[c]) * u) *
                               inv_h2;
            const double res = lap + lambda * pow_nonneg(u, p - 1.0);
            worst = std::max(worst, std::abs(res));
        }
    }
    return worst / (std::abs(lambda) * pow_nonneg(mx, p - 1.0));
}

namespace {

// inject a factor-2 coarser solution into a finer mask
void prolong(const ScalarField& coarse, ScalarField& fine) {
    const Mask& cm = coarse.mask;
    const Mask& fm = fine.mask;
    const double fill = 1e-3 * coarse.max_value();
    for (int j = 0; j < fm.ny; ++j) {
        const int cj = std::min(j / 2, cm.ny - 1);
        for (int i = 0; i < fm.nx; ++i) {
            if (!fm.at(i, j))
                continue;
            const int ci = std::min(i / 2, cm.nx - 1);
            double v = cm.at(ci, cj) ? coarse.at(ci, cj) : 0.0;
            if (v == 0.0)
                v = fill; // cell has no interior parent: seed positive
            fine.at(i, j) = v;
        }
    }
}

} // namespace

ScalarField solve_field(const Domain& d, double p, double h, const FlowParams& fp) {
    std::vector<double> levels{h};
    if (h <= 1.0 / 64)
        levels.insert(levels.begin(), 2.0 * h);
    if (h <= 1.0 / 128)
        levels.insert(levels.begin(), 4.0 * h);

    ScalarField result;
    bool have = false;
    for (double hh : levels) {
        Mask m;
        try {
            m = rasterize(d, hh);
        } catch (const Error& e) {
            if (e.code() == errc::resolution_too_coarse && hh != h)
                continue;
            throw;
        }
        FlowParams params = fp;
        ScalarField seed;
        if (have) {
            seed.mask = m;
            seed.p = p;
            seed.values.assign(static_cast<size_t>(m.nx + 2) * (m.ny + 2), 0.0);
            prolong(result, seed);
            params.init = &seed;
        }
        if (hh != h) // coarse levels only rough out the shape
            params.quotient_tol = std::max(fp.quotient_tol, 1e-10);
        result = minimize_quotient(m, p, params);
        have = true;
    }
    result.domain_id = d.id();
    return result;
}

} // namespace sobex
