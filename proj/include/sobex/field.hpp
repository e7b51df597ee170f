#pragma once

#include "sobex/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sobex {

/// Raster of interior cells over the domain's bounding box. Cell (i, j)
/// has its center at (x0 + (i+0.5) h, y0 + (j+0.5) h).
struct Mask {
    int nx = 0, ny = 0;
    double h = 0.0;
    double x0 = 0.0, y0 = 0.0;
    std::vector<std::uint8_t> inside; // nx * ny
    int count = 0;

    bool at(int i, int j) const { return inside[static_cast<size_t>(j) * nx + i] != 0; }
    double area() const { return count * h * h; }
};

Mask rasterize(const Domain& d, double h);

/// phi on a masked uniform grid. Values are stored on a padded
/// (nx+2) x (ny+2) raster with a zero ring; they are 0 outside the mask.
struct ScalarField {
    Mask mask;
    double p = 0.0;
    std::string domain_id;
    std::vector<double> values; // padded
    double quotient = 0.0;      // discrete Sobolev quotient of the solve
    double lambda = 0.0;        // quotient * (int phi^p)^{(2-p)/p}
    long iterations = 0;

    std::ptrdiff_t stride() const { return mask.nx + 2; }
    double& at(int i, int j) { return values[static_cast<size_t>(j + 1) * stride() + (i + 1)]; }
    double at(int i, int j) const {
        return values[static_cast<size_t>(j + 1) * stride() + (i + 1)];
    }
    double max_value() const;
    /// cell sum of value^q times h^2
    double integral_pow(double q) const;
};

struct FlowParams {
    double dt = 0.0;            // 0: h^2/6
    long max_iters = 2000000;
    double quotient_tol = 1e-12; // relative quotient change per step
    const ScalarField* init = nullptr;  // optional warm start (e.g. coarser solve)
    std::vector<double>* trace = nullptr; // accepted-step quotients, for diagnostics
};

/// Normalized gradient descent on the discrete Sobolev quotient.
ScalarField minimize_quotient(const Mask& mask, double p, const FlowParams& fp = {});

double quotient_value(const ScalarField& f, double p);

/// Max interior residual of the discrete equation, normalized by
/// lambda * (max phi)^{p-1}.
double pde_residual(const ScalarField& f, double lambda, double p);

/// Rasterize + coarse-to-fine continuation down to spacing h.
ScalarField solve_field(const Domain& d, double p, double h, const FlowParams& fp = {});

} // namespace sobex
