#include "sobex/kernels.hpp"

#include <algorithm>
#include <cmath>

// Scalar reference kernels. Loops are blocked into 4 lanes with per-row
// lane accumulators mirroring the AVX2 variants, so reductions use the
// same association order in both backends. Keep this file free of FP
// contraction (compiled with -ffp-contract=off).

namespace sobex::kernels {
namespace {

inline double pow_nonneg(double x, double e) {
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

struct LaneAcc {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};

    void add_row(const double* row_lanes) {
        acc[0] += row_lanes[0];
        acc[1] += row_lanes[1];
        acc[2] += row_lanes[2];
        acc[3] += row_lanes[3];
    }
    double total() const { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }
};

FlowStats flow_step_scalar(const double* u, const double* maskf, const double* bc, double* v,
                           std::ptrdiff_t nx, std::ptrdiff_t ny, std::ptrdiff_t stride,
                           double inv_h2, double dt, double lam, double pm1, double pexp) {
    LaneAcc e_acc, s_acc;
    for (std::ptrdiff_t j = 1; j <= ny; ++j) {
        const double* uc = u + j * stride;
        const double* un = uc - stride;
        const double* us = uc + stride;
        const double* mc = maskf + j * stride;
        const double* bcc = bc + j * stride;
        double* vc = v + j * stride;
        double le[4] = {0, 0, 0, 0}, ls[4] = {0, 0, 0, 0};
        for (std::ptrdiff_t i = 1; i <= nx; ++i) {
            const int lane = static_cast<int>((i - 1) & 3);
            const double uu = uc[i];
            const double st = ((uc[i - 1] + uc[i + 1]) + (un[i] + us[i])) - (4.0 + bcc[i]) * uu;
            le[lane] += uu * st;
            const double pw = pow_nonneg(uu, pm1);
            const double raw = uu + dt * (st * inv_h2 + lam * pw);
            const double vv = std::max(raw, 0.0) * mc[i];
            vc[i] = vv;
            ls[lane] += pow_nonneg(vv, pexp);
        }
        e_acc.add_row(le);
        s_acc.add_row(ls);
    }
    return {-e_acc.total(), s_acc.total()};
}

double sum_pow_scalar(const double* u, std::ptrdiff_t nx, std::ptrdiff_t ny,
                      std::ptrdiff_t stride, double pexp) {
    LaneAcc acc;
    for (std::ptrdiff_t j = 1; j <= ny; ++j) {
        const double* uc = u + j * stride;
        double l[4] = {0, 0, 0, 0};
        for (std::ptrdiff_t i = 1; i <= nx; ++i)
            l[(i - 1) & 3] += pow_nonneg(uc[i], pexp);
        acc.add_row(l);
    }
    return acc.total();
}

double dirichlet_energy_scalar(const double* u, const double* bc, std::ptrdiff_t nx,
                               std::ptrdiff_t ny, std::ptrdiff_t stride) {
    LaneAcc ex, ey, eb;
    for (std::ptrdiff_t j = 1; j <= ny; ++j) {
        const double* uc = u + j * stride;
        const double* bcc = bc + j * stride;
        double lx[4] = {0, 0, 0, 0}, lb[4] = {0, 0, 0, 0};
        for (std::ptrdiff_t i = 0; i <= nx; ++i) { // pairs (i, i+1) incl. ring edges
            const double d = uc[i + 1] - uc[i];
            lx[i & 3] += d * d;
        }
        for (std::ptrdiff_t i = 1; i <= nx; ++i)
            lb[(i - 1) & 3] += bcc[i] * (uc[i] * uc[i]);
        ex.add_row(lx);
        eb.add_row(lb);
    }
    for (std::ptrdiff_t j = 0; j <= ny; ++j) { // row pairs (j, j+1)
        const double* ua = u + j * stride;
        const double* ub = ua + stride;
        double ly[4] = {0, 0, 0, 0};
        for (std::ptrdiff_t i = 1; i <= nx; ++i) {
            const double d = ub[i] - ua[i];
            ly[(i - 1) & 3] += d * d;
        }
        ey.add_row(ly);
    }
    return (ex.total() + ey.total()) + eb.total();
}

void scale_scalar(double* u, std::ptrdiff_t count, double c) {
    for (std::ptrdiff_t i = 0; i < count; ++i)
        u[i] *= c;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops = {flow_step_scalar, sum_pow_scalar, dirichlet_energy_scalar,
                            scale_scalar, "scalar"};
    return ops;
}

} // namespace sobex::kernels
