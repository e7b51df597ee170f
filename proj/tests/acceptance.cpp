// Acceptance suite: one pass/fail line per criterion. Returns the number
// of failed criteria. Heavier grid solves are shared between criteria.

#include "sobex/geometry.hpp"
#include "sobex/io.hpp"
#include "sobex/pipeline.hpp"

#include "oracles.hpp"
#include "subprocess.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

using namespace sobex;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

nlohmann::json run_cli_ball(int n, double p, const fs::path& dir, double& seconds,
                            int& exit_code) {
    const std::string prefix = "c" + std::to_string(n);
    Timer t;
    const auto r = testutil::run_command(testutil::cli_path() + " ball -n " + std::to_string(n) +
                                         " -p " + io::fmt10(p) + " --out " + dir.string() +
                                         " --prefix " + prefix);
    seconds = t.seconds();
    exit_code = r.exit_code;
    std::ifstream in(dir / (prefix + "_report.json"));
    nlohmann::json j;
    if (in)
        in >> j;
    return j;
}

} // namespace

int main() {
    const fs::path tmp =
        fs::temp_directory_path() / ("sobex_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(tmp);

    const double j01 = oracle::first_j0_zero();

    // 1. disk eigenvalue through the CLI against the series oracle
    {
        double secs = 0.0;
        int rc = -1;
        const auto rep = run_cli_ball(2, 2.0, tmp, secs, rc);
        bool pass = rc == 0 && !rep.is_null();
        double rel = 1.0;
        if (pass) {
            const double cp = rep["inputs"]["c_p"].get<double>();
            rel = std::abs(cp - j01 * j01) / (j01 * j01);
            pass = rel <= 1e-9 && secs < 1.0;
        }
        report(1, "disk eigenvalue oracle (ball -n 2 -p 2)", pass,
               "rel gap " + fmt(rel) + ", " + fmt(secs) + " s, exit " + std::to_string(rc));
    }

    // 2. three-ball eigenvalue pi^2 through the CLI
    {
        double secs = 0.0;
        int rc = -1;
        const auto rep = run_cli_ball(3, 2.0, tmp, secs, rc);
        bool pass = rc == 0 && !rep.is_null();
        double rel = 1.0;
        if (pass) {
            const double cp = rep["inputs"]["c_p"].get<double>();
            rel = std::abs(cp - pi * pi) / (pi * pi);
            pass = rel <= 1e-9 && secs < 1.0;
        }
        report(2, "3-ball oracle (ball -n 3 -p 2)", pass,
               "rel gap " + fmt(rel) + ", " + fmt(secs) + " s, exit " + std::to_string(rc));
    }

    // 3. ball equality across (n, p, rho_M); records the variant achieving it
    double ball_slack = 0.0;
    {
        Timer t;
        double worst_proof = 0.0, best_theorem_n3 = 1e9;
        for (int n : {2, 3})
            for (double p : {1.5, 2.0, 2.5})
                for (double rho : {0.7, 1.0, 1.6}) {
                    const auto run = run_ball_case(n, p, rho, 10000, 1000);
                    const double rel = std::abs(run.report.deficit_proof) / run.report.lhs;
                    worst_proof = std::max(worst_proof, rel);
                    if (n == 3)
                        best_theorem_n3 = std::min(
                            best_theorem_n3,
                            std::abs(run.report.deficit_theorem) / run.report.lhs);
                }
        ball_slack = worst_proof;
        const double secs = t.seconds();
        const bool pass = worst_proof <= 1e-3 && secs < 30.0;
        report(3, "ball equality over {2,3}x{1.5,2,2.5}x{0.7,1,1.6}", pass,
               "max |deficit|/lhs " + fmt(worst_proof) + " (proof variant; printed variant misses by " +
                   fmt(best_theorem_n3) + " at n=3), " + fmt(secs) + " s");
    }

    // 4. Payne-Rayner specialization on the disk
    {
        Timer t;
        const auto run = run_ball_case(2, 2.0, 1.0);
        const double lhs = run.report.int_pm1 * run.report.int_pm1;
        const double rhs = 4.0 * pi / run.report.lambda * run.report.int_p;
        const double rel = std::abs(lhs - rhs) / lhs;
        const double closed = 2.0 * std::sqrt(pi) / j01; // int phi for the unit-mass profile
        const double cross = std::abs(run.report.int_pm1 - closed) / closed;
        const bool pass = rel <= 1e-6 && cross <= 1e-6 && t.seconds() < 1.0;
        report(4, "Payne-Rayner equality (int phi)^2 = (4pi/lambda) int phi^2", pass,
               "identity gap " + fmt(rel) + ", closed-form gap " + fmt(cross));
    }

    // 5. non-ball strictness at h = 1/128 (fields cached for criterion 7)
    std::map<std::pair<int, int>, DomainRun> grid_runs; // (domain, p*10)
    {
        Timer t;
        bool pass = true;
        std::string detail;
        const Domain square = Domain::rectangle(1.0, 1.0);
        const Domain ellipse = Domain::ellipse(2.0, 1.0);
        for (int d = 0; d < 2; ++d)
            for (double p : {2.0, 3.0}) {
                auto run = run_domain_case(d == 0 ? square : ellipse, p, 1.0 / 128, 256, 2048);
                const double rel = run.report.deficit_proof / run.report.lhs;
                const bool ok = rel > 0.0 && rel > 3.0 * ball_slack;
                pass = pass && ok;
                detail += (d == 0 ? "sq" : "el") + std::string(" p=") + fmt(p) + ": " + fmt(rel) + "  ";
                grid_runs.emplace(std::make_pair(d, static_cast<int>(p * 10)), std::move(run));
            }
        const double secs = t.seconds();
        pass = pass && secs < 60.0;
        report(5, "non-ball strict deficit > 3x ball slack", pass,
               detail + fmt(secs) + " s, 3x slack " + fmt(3.0 * ball_slack));
    }

    // 6. sandwich identity Lambda* = (n omega_n)^{(2-p)/p} C_p(B_rho)
    {
        Timer t;
        double worst = 0.0;
        for (int n : {2, 3})
            for (double p : {1.5, 2.0, 2.5}) {
                const auto g = sandwich_check(n, p, 1.0);
                worst = std::max({worst, std::abs(g.lower_gap), std::abs(g.upper_gap)});
            }
        const double secs = t.seconds();
        const bool pass = worst <= 1e-3 && secs < 30.0;
        report(6, "sandwich identity over {2,3}x{1.5,2,2.5}", pass,
               "max gap " + fmt(worst) + ", " + fmt(secs) + " s");
    }

    // 7. identity suite: dH/dV, change-var identity, Eq-(1.3) residual,
    //    isoperimetric ratio
    {
        bool pass = true;
        std::string detail;

        const auto rp = solve_radial_profile(2, 2.0, 1.0, 1e-12, 10000);
        const auto ls1 = build_levelsets(rp, 1000);
        const auto ls2 = build_levelsets(rp, 2000);
        const double dh1 = dhdv_check(ls1), dh2 = dhdv_check(ls2);
        pass = pass && dh1 <= 1e-3 && dh2 <= 0.5 * dh1;
        detail += "radial dHdV " + fmt(dh1) + "->" + fmt(dh2) + "  ";

        const double cv1 = change_var3_identity(ls1, rp.moment(2.0));
        const double cv2 = change_var3_identity(ls2, rp.moment(2.0));
        pass = pass && cv1 <= 1e-3 && cv2 <= 0.75 * cv1;
        detail += "radial cv3 " + fmt(cv1) + "->" + fmt(cv2) + "  ";

        const auto& sq2 = grid_runs.at({0, 20});
        const double gdh = dhdv_check(sq2.levels);
        const double gcv = change_var3_identity(sq2.levels, sq2.report.int_p);
        pass = pass && gdh <= 5e-2 && gcv <= 5e-2;
        detail += "grid dHdV " + fmt(gdh) + " cv3 " + fmt(gcv) + "  ";

        // dH/dV improves when the grid is refined
        {
            const auto fine = run_domain_case(Domain::rectangle(1.0, 1.0), 2.0, 1.0 / 256, 512, 256);
            const double fdh = dhdv_check(fine.levels);
            const double fcv = change_var3_identity(fine.levels, fine.report.int_p);
            pass = pass && fdh <= 0.7 * gdh && fcv <= 0.7 * gcv;
            detail += "refined " + fmt(fdh) + "/" + fmt(fcv) + "  ";
        }

        // Eq-(1.3) residual on all solved sources via independent sums
        double worst13 = 0.0;
        {
            auto simpson = [](const RadialProfile& r, double q) {
                const size_t N = r.r.size() - 1;
                const double h = r.r[1] - r.r[0];
                double s = 0.0;
                for (size_t i = 0; i <= N; ++i) {
                    const double w = (i == 0 || i == N) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
                    s += w * std::pow(r.r[i], r.n - 1) * std::pow(std::max(r.phi[i], 0.0), q);
                }
                return unit_ball_volume(r.n) * r.n * s * h / 3.0;
            };
            const double sp = simpson(rp, 2.0);
            worst13 = std::abs(rp.lambda - rp.c_p * std::pow(sp, 0.0)) / rp.lambda;
            worst13 = std::max(worst13, std::abs(sp - 1.0)); // the solver normalizes to 1
            for (const auto& [key, run] : grid_runs) {
                (void)key;
                double s = 0.0;
                const auto& f = run.field;
                for (int j = 0; j < f.mask.ny; ++j)
                    for (int i = 0; i < f.mask.nx; ++i)
                        if (f.mask.at(i, j))
                            s += std::pow(f.at(i, j), f.p);
                s *= f.mask.h * f.mask.h;
                const double lam = f.quotient * std::pow(s, (2.0 - f.p) / f.p);
                worst13 = std::max(worst13, std::abs(f.lambda - lam) / f.lambda);
            }
            pass = pass && worst13 <= 1e-8;
            detail += "eq13 " + fmt(worst13) + "  ";
        }

        const double iso_r = isoperimetric_check(ls1);
        double iso_g = 1.0;
        for (const auto& [key, run] : grid_runs) {
            (void)key;
            iso_g = std::min(iso_g, isoperimetric_check(run.levels));
        }
        pass = pass && iso_r >= 1.0 - 1e-10 && iso_g >= 1.0 - 2e-2;
        detail += "iso radial " + fmt(iso_r) + " grid " + fmt(iso_g);
        report(7, "identity suite", pass, detail);
    }

    // 8. scaling laws and report invariance under phi -> c phi
    {
        bool pass = true;
        std::string detail;
        for (int n : {2, 3}) {
            const double c1 = sobolev_constant_ball(n, 2.5);
            for (double s : {0.5, 2.0}) {
                const double rel = std::abs(sobolev_constant_ball(n, 2.5, s) /
                                                (std::pow(s, n - 2.0 - 2.0 * n / 2.5) * c1) -
                                            1.0);
                pass = pass && rel <= 1e-8;
                detail += "r" + std::to_string(n) + "/" + fmt(s) + " " + fmt(rel) + "  ";
            }
        }
        {
            const double q1 = grid_runs.at({0, 20}).field.quotient;
            for (double s : {0.5, 2.0}) {
                const auto f = solve_field(Domain::rectangle(s, s), 2.0, 1.0 / 128);
                const double rel = std::abs(f.quotient / (q1 / (s * s)) - 1.0);
                pass = pass && rel <= 1e-2;
                detail += "g" + fmt(s) + " " + fmt(rel) + "  ";
            }
        }
        {
            const auto run = run_ball_case(2, 2.5, 1.0, 4000, 500, 1024);
            const double base = run.report.deficit_proof / run.report.lhs;
            double worst = 0.0;
            for (double c : {0.5, 2.0}) {
                RadialProfile rps = run.profile;
                rps.M *= c;
                rps.lambda *= std::pow(c, 2.0 - rps.p);
                for (auto& v : rps.phi)
                    v *= c;
                for (auto& v : rps.dphi)
                    v *= c;
                for (auto& v : rps.cum_pm1)
                    v *= std::pow(c, rps.p - 1.0);
                for (auto& [q, v] : rps.moments)
                    v *= std::pow(c, q);
                const auto rep = evaluate_main_inequality(SourceSummary::from(rps),
                                                          build_levelsets(rps, 500), run.lsr);
                worst = std::max(worst, std::abs(rep.deficit_proof / rep.lhs - base));
            }
            pass = pass && worst <= 1e-10;
            detail += "phi->c phi " + fmt(worst);
        }
        report(8, "scaling laws", pass, detail);
    }

    // 9. square eigenvalue convergence
    {
        Timer t;
        const double exact = 2.0 * pi * pi;
        const double q128 = grid_runs.at({0, 20}).field.quotient;
        const auto f256 = solve_field(Domain::rectangle(1.0, 1.0), 2.0, 1.0 / 256);
        const double e128 = std::abs(q128 - exact) / exact;
        const double e256 = std::abs(f256.quotient - exact) / exact;
        const double secs = t.seconds();
        const bool pass = e128 <= 5e-3 && e128 / e256 >= 2.0 && secs < 30.0;
        report(9, "square eigenvalue 2pi^2, second-order trend", pass,
               "rel err " + fmt(e128) + " -> " + fmt(e256) + " (ratio " + fmt(e128 / e256) +
                   "), " + fmt(secs) + " s");
    }

    fs::remove_all(tmp);
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
