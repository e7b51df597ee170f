#pragma once

#include "sobex/field.hpp"
#include "sobex/lambda_star.hpp"
#include "sobex/levelset.hpp"
#include "sobex/radial.hpp"
#include "sobex/report.hpp"

namespace sobex {

struct BallRun {
    RadialProfile profile;
    LevelSetData levels;
    LambdaStarResult lsr;
    InequalityReport report;
};

BallRun run_ball_case(int n, double p, double rho_M, int samples = 10000, int levels = 1000,
                      int grid_points = 2048, double tol = 1e-12);

struct DomainRun {
    ScalarField field;
    LevelSetData levels;
    LambdaStarResult lsr;
    InequalityReport report;
};

DomainRun run_domain_case(const Domain& d, double p, double h, int levels = 256,
                          int grid_points = 2048, const FlowParams& fp = {});

} // namespace sobex
