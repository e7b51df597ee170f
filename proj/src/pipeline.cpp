#include "sobex/pipeline.hpp"

#include "sobex/error.hpp"
#include "sobex/geometry.hpp"

namespace sobex {

BallRun run_ball_case(int n, double p, double rho_M, int samples, int levels, int grid_points,
                      double tol) {
    BallRun run;
    run.profile = solve_radial_profile(n, p, rho_M, tol, samples);
    run.levels = build_levelsets(run.profile, levels);
    run.lsr = solve_lambda_star(n, p, rho_M, grid_points);
    run.report = evaluate_main_inequality(SourceSummary::from(run.profile), run.levels, run.lsr);
    return run;
}

DomainRun run_domain_case(const Domain& d, double p, double h, int levels, int grid_points,
                          const FlowParams& fp) {
    if (d.kind == DomainKind::ball && d.n != 2)
        throw Error(errc::unsupported_source, "grid pipeline is 2-D; use the radial pipeline");
    DomainRun run;
    run.field = solve_field(d, p, h, fp);
    run.levels = build_levelsets(run.field, levels);
    const double rho_star = volume_radius(run.field.mask.area(), 2);
    run.lsr = solve_lambda_star(2, p, rho_star, grid_points);
    run.report = evaluate_main_inequality(SourceSummary::from(run.field), run.levels, run.lsr);
    return run;
}

} // namespace sobex
