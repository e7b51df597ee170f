#include "sobex/kernels.hpp"

#if defined(__AVX2__) && (defined(__x86_64__) || defined(_M_X64))
#define SOBEX_HAVE_AVX2 1
#include <immintrin.h>
#else
#define SOBEX_HAVE_AVX2 0
#endif

#include <algorithm>
#include <cmath>

// AVX2 variants of the grid kernels. Reductions keep 4 independent lanes
// and fold them in the same order as the scalar reference, so the two
// backends agree bit for bit on the power fast paths (exponents 1, 2, 3,
// 0.5); general exponents go through scalar std::pow per lane.

namespace sobex::kernels {

#if SOBEX_HAVE_AVX2

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

enum class PowPath { one, two, three, half, general };

inline PowPath pow_path(double e) {
    if (e == 1.0)
        return PowPath::one;
    if (e == 2.0)
        return PowPath::two;
    if (e == 3.0)
        return PowPath::three;
    if (e == 0.5)
        return PowPath::half;
    return PowPath::general;
}

inline __m256d pow_vec(__m256d x, PowPath path, double e) {
    switch (path) {
    case PowPath::one: return x;
    case PowPath::two: return _mm256_mul_pd(x, x);
    case PowPath::three: return _mm256_mul_pd(_mm256_mul_pd(x, x), x);
    case PowPath::half: return _mm256_sqrt_pd(x);
    case PowPath::general: {
        alignas(32) double t[4];
        _mm256_store_pd(t, x);
        t[0] = std::pow(t[0], e);
        t[1] = std::pow(t[1], e);
        t[2] = std::pow(t[2], e);
        t[3] = std::pow(t[3], e);
        return _mm256_load_pd(t);
    }
    }
    return x;
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

FlowStats flow_step_avx2(const double* u, const double* maskf, const double* bc, double* v,
                         std::ptrdiff_t nx, std::ptrdiff_t ny, std::ptrdiff_t stride,
                         double inv_h2, double dt, double lam, double pm1, double pexp) {
    const PowPath path1 = pow_path(pm1);
    const PowPath path2 = pow_path(pexp);
    const __m256d vfour = _mm256_set1_pd(4.0);
    const __m256d vinvh2 = _mm256_set1_pd(inv_h2);
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d vlam = _mm256_set1_pd(lam);
    const __m256d vzero = _mm256_setzero_pd();
    const std::ptrdiff_t m4 = nx & ~std::ptrdiff_t(3);
    LaneAcc e_acc, s_acc;
    for (std::ptrdiff_t j = 1; j <= ny; ++j) {
        const double* uc = u + j * stride;
        const double* un = uc - stride;
        const double* us = uc + stride;
        const double* mc = maskf + j * stride;
        const double* bcc = bc + j * stride;
        double* vc = v + j * stride;
        __m256d ve = vzero, vs = vzero;
        std::ptrdiff_t i = 1;
        for (; i + 3 <= nx; i += 4) {
            const __m256d uu = _mm256_loadu_pd(uc + i);
            const __m256d uw = _mm256_loadu_pd(uc + i - 1);
            const __m256d ue = _mm256_loadu_pd(uc + i + 1);
            const __m256d unn = _mm256_loadu_pd(un + i);
            const __m256d uss = _mm256_loadu_pd(us + i);
            const __m256d diag = _mm256_add_pd(vfour, _mm256_loadu_pd(bcc + i));
            const __m256d st = _mm256_sub_pd(
                _mm256_add_pd(_mm256_add_pd(uw, ue), _mm256_add_pd(unn, uss)),
                _mm256_mul_pd(diag, uu));
            ve = _mm256_add_pd(ve, _mm256_mul_pd(uu, st));
            const __m256d pw = pow_vec(uu, path1, pm1);
            const __m256d raw = _mm256_add_pd(
                uu, _mm256_mul_pd(vdt, _mm256_add_pd(_mm256_mul_pd(st, vinvh2),
                                                     _mm256_mul_pd(vlam, pw))));
            const __m256d vv =
                _mm256_mul_pd(_mm256_max_pd(raw, vzero), _mm256_loadu_pd(mc + i));
            _mm256_storeu_pd(vc + i, vv);
            vs = _mm256_add_pd(vs, pow_vec(vv, path2, pexp));
        }
        alignas(32) double le[4], ls[4];
        _mm256_store_pd(le, ve);
        _mm256_store_pd(ls, vs);
        for (; i <= nx; ++i) {
            const int lane = static_cast<int>((i - 1) - m4);
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

double sum_pow_avx2(const double* u, std::ptrdiff_t nx, std::ptrdiff_t ny,
                    std::ptrdiff_t stride, double pexp) {
    const PowPath path = pow_path(pexp);
    const std::ptrdiff_t m4 = nx & ~std::ptrdiff_t(3);
    LaneAcc acc;
    for (std::ptrdiff_t j = 1; j <= ny; ++j) {
        const double* uc = u + j * stride;
        __m256d va = _mm256_setzero_pd();
        std::ptrdiff_t i = 1;
        for (; i + 3 <= nx; i += 4)
            va = _mm256_add_pd(va, pow_vec(_mm256_loadu_pd(uc + i), path, pexp));
        alignas(32) double l[4];
        _mm256_store_pd(l, va);
        for (; i <= nx; ++i)
            l[(i - 1) - m4] += pow_nonneg(uc[i], pexp);
        acc.add_row(l);
    }
    return acc.total();
}

double dirichlet_energy_avx2(const double* u, const double* bc, std::ptrdiff_t nx,
                             std::ptrdiff_t ny, std::ptrdiff_t stride) {
    LaneAcc ex, ey, eb;
    const std::ptrdiff_t mx4 = (nx + 1) & ~std::ptrdiff_t(3); // pairs start at col 0
    const std::ptrdiff_t m4 = nx & ~std::ptrdiff_t(3);
    for (std::ptrdiff_t j = 1; j <= ny; ++j) {
        const double* uc = u + j * stride;
        const double* bcc = bc + j * stride;
        __m256d vx = _mm256_setzero_pd(), vb = _mm256_setzero_pd();
        std::ptrdiff_t i = 0;
        for (; i + 3 <= nx; i += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(uc + i + 1), _mm256_loadu_pd(uc + i));
            vx = _mm256_add_pd(vx, _mm256_mul_pd(d, d));
        }
        alignas(32) double lx[4];
        _mm256_store_pd(lx, vx);
        for (; i <= nx; ++i) {
            const double d = uc[i + 1] - uc[i];
            lx[i - mx4] += d * d;
        }
        std::ptrdiff_t k = 1;
        for (; k + 3 <= nx; k += 4) {
            const __m256d uu = _mm256_loadu_pd(uc + k);
            vb = _mm256_add_pd(vb, _mm256_mul_pd(_mm256_loadu_pd(bcc + k), _mm256_mul_pd(uu, uu)));
        }
        alignas(32) double lb[4];
        _mm256_store_pd(lb, vb);
        for (; k <= nx; ++k)
            lb[(k - 1) - m4] += bcc[k] * (uc[k] * uc[k]);
        ex.add_row(lx);
        eb.add_row(lb);
    }
    for (std::ptrdiff_t j = 0; j <= ny; ++j) {
        const double* ua = u + j * stride;
        const double* ub = ua + stride;
        __m256d vy = _mm256_setzero_pd();
        std::ptrdiff_t i = 1;
        for (; i + 3 <= nx; i += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(ub + i), _mm256_loadu_pd(ua + i));
            vy = _mm256_add_pd(vy, _mm256_mul_pd(d, d));
        }
        alignas(32) double ly[4];
        _mm256_store_pd(ly, vy);
        for (; i <= nx; ++i) {
            const double d = ub[i] - ua[i];
            ly[(i - 1) - m4] += d * d;
        }
        ey.add_row(ly);
    }
    return (ex.total() + ey.total()) + eb.total();
}

void scale_avx2(double* u, std::ptrdiff_t count, double c) {
    const __m256d vc = _mm256_set1_pd(c);
    std::ptrdiff_t i = 0;
    for (; i + 3 < count; i += 4)
        _mm256_storeu_pd(u + i, _mm256_mul_pd(_mm256_loadu_pd(u + i), vc));
    for (; i < count; ++i)
        u[i] *= c;
}

const Ops avx2_ops_table = {flow_step_avx2, sum_pow_avx2, dirichlet_energy_avx2, scale_avx2,
                            "avx2"};

} // namespace

const Ops* avx2_ops_or_null() { return &avx2_ops_table; }

#else

const Ops* avx2_ops_or_null() { return nullptr; }

#endif

} // namespace sobex::kernels
