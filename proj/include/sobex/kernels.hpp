#pragma once

#include <cstddef>

namespace sobex::kernels {

// Grid kernels for the masked gradient flow. Fields live on a padded
// (nx+2) x (ny+2) row-major raster with a zero ring; interior cell (i, j)
// is at index (j+1)*stride + (i+1). All kernels exist as a scalar
// reference and (on x86-64 with AVX2) a vectorized variant selected at
// runtime; both produce identical accumulation order for the reductions
// (4 independent lanes), so results agree bit for bit on the fast paths.

struct FlowStats {
    double energy_u;  // -sum u * S(u), S = 5-point stencil with face-Dirichlet correction
    double sumpow_v;  // sum v^p of the updated field
};

struct Ops {
    // v = max(u + dt*((uW+uE+uN+uS-(4+bc)u)*inv_h2 + lam*u^pm1), 0) * maskf
    FlowStats (*flow_step)(const double* u, const double* maskf, const double* bc, double* v,
                           std::ptrdiff_t nx, std::ptrdiff_t ny, std::ptrdiff_t stride,
                           double inv_h2, double dt, double lam, double pm1, double pexp);
    // sum over the padded interior of u^pexp (u >= 0)
    double (*sum_pow)(const double* u, std::ptrdiff_t nx, std::ptrdiff_t ny,
                      std::ptrdiff_t stride, double pexp);
    // sum over adjacent pairs of (u_a-u_b)^2 plus sum bc*u^2
    double (*dirichlet_energy)(const double* u, const double* bc, std::ptrdiff_t nx,
                               std::ptrdiff_t ny, std::ptrdiff_t stride);
    void (*scale)(double* u, std::ptrdiff_t count, double c);
    const char* name;
};

const Ops& scalar_ops();
bool avx2_available();       // compiled in and supported by this CPU
const Ops& active_ops();     // runtime selection; SOBEX_KERNEL=scalar|avx2 overrides

} // namespace sobex::kernels
