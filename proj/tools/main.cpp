// sobex: extremal Sobolev functions, sharp constants, and the
// reverse-Holder inequality report, on balls (any dimension) and planar
// grids. Subcommands: ball, domain, sweep, lambda-star.

#include "sobex/error.hpp"
#include "sobex/io.hpp"
#include "sobex/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_inequality = 2;
constexpr int exit_solver = 3;
constexpr int exit_config = 4;

int exit_code_for(const sobex::Error& e) {
    switch (e.code()) {
    case sobex::errc::config_error:
    case sobex::errc::invalid_dimension:
    case sobex::errc::invalid_measure:
    case sobex::errc::invalid_geometry:
    case sobex::errc::subcriticality_violation:
    case sobex::errc::inconsistent_inputs:
        return exit_config;
    default:
        return exit_solver;
    }
}

void print_error(const sobex::Error& e) {
    sobex::io::Json j;
    j.str("error", sobex::errc_name(e.code()));
    j.str("message", e.what());
    std::cout << j.dump() << "\n";
}

std::string trim_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// config file fallback: apply cfg[key] to options the user did not pass
class ConfigMerge {
public:
    explicit ConfigMerge(CLI::App* app) : app_(app) {}

    void load(const std::string& path) {
        if (path.empty())
            return;
        std::ifstream in(path);
        if (!in)
            throw sobex::Error(sobex::errc::config_error, "cannot open config " + path);
        try {
            in >> cfg_;
        } catch (const std::exception& e) {
            throw sobex::Error(sobex::errc::config_error,
                               std::string("bad config JSON: ") + e.what());
        }
    }

    template <typename T> void fallback(const std::string& name, T& value) const {
        if (cfg_.is_null() || !cfg_.contains(name))
            return;
        const CLI::Option* opt = app_->get_option("--" + name);
        if (opt != nullptr && opt->count() > 0)
            return; // flags override file
        value = cfg_.at(name).get<T>();
    }

    const nlohmann::json& raw() const { return cfg_; }

private:
    CLI::App* app_;
    nlohmann::json cfg_;
};

struct BallArgs {
    int n = 2;
    double p = 2.0;
    double rho = 1.0;
    int samples = 10000;
    int levels = 1000;
    int grid_points = 2048;
    double tol = 1e-12;
    double slack = 1e-3;
    std::string out = ".";
    std::string prefix;
    std::string config;
};

int cmd_ball(BallArgs a, const ConfigMerge& cfg) {
    cfg.fallback("n", a.n);
    cfg.fallback("p", a.p);
    cfg.fallback("rho", a.rho);
    cfg.fallback("samples", a.samples);
    cfg.fallback("levels", a.levels);
    cfg.fallback("grid-points", a.grid_points);
    cfg.fallback("tol", a.tol);
    cfg.fallback("slack", a.slack);

    const auto run = sobex::run_ball_case(a.n, a.p, a.rho, a.samples, a.levels, a.grid_points,
                                          a.tol);
    namespace fs = std::filesystem;
    fs::create_directories(a.out);
    const std::string prefix =
        a.prefix.empty() ? "ball_n" + std::to_string(a.n) + "_p" + trim_num(a.p) : a.prefix;
    const std::string base = (fs::path(a.out) / prefix).string();
    sobex::io::write_file(base + "_profile.csv", sobex::io::profile_csv(run.profile));
    sobex::io::write_file(base + "_profile.json", sobex::io::profile_header_json(run.profile));
    sobex::io::write_file(base + "_levels.csv", sobex::io::levelset_csv(run.levels));
    sobex::io::write_file(base + "_report.json", sobex::io::report_json(run.report));
    std::cout << sobex::io::report_json(run.report) << "\n";

    const double rel = std::abs(run.report.deficit_proof) / run.report.lhs;
    return rel <= a.slack ? exit_ok : exit_inequality;
}

struct DomainArgs {
    std::string spec;
    double p = 2.0;
    double h = 1.0 / 128;
    int levels = 256;
    int grid_points = 2048;
    double flow_tol = 1e-12;
    double slack = 0.02;
    std::string out = ".";
    std::string prefix;
    std::string config;
};

int cmd_domain(DomainArgs a, const ConfigMerge& cfg) {
    cfg.fallback("p", a.p);
    cfg.fallback("h", a.h);
    cfg.fallback("levels", a.levels);
    cfg.fallback("grid-points", a.grid_points);
    cfg.fallback("flow-tol", a.flow_tol);
    cfg.fallback("slack", a.slack);

    const sobex::Domain d = sobex::io::domain_from_json_file(a.spec);
    sobex::FlowParams fp;
    fp.quotient_tol = a.flow_tol;
    const auto run = sobex::run_domain_case(d, a.p, a.h, a.levels, a.grid_points, fp);

    namespace fs = std::filesystem;
    fs::create_directories(a.out);
    const std::string prefix = a.prefix.empty()
                                   ? std::string("domain_") + sobex::domain_kind_name(d.kind) +
                                         "_p" + trim_num(a.p)
                                   : a.prefix;
    const std::string base = (fs::path(a.out) / prefix).string();
    sobex::io::write_file(base + "_field.csv", sobex::io::field_csv(run.field));
    sobex::io::write_file(base + "_field.json", sobex::io::field_header_json(run.field));
    sobex::io::write_file(base + "_levels.csv", sobex::io::levelset_csv(run.levels));
    sobex::io::write_file(base + "_report.json", sobex::io::report_json(run.report));
    std::cout << sobex::io::report_json(run.report) << "\n";

    const auto& rep = run.report;
    const bool ok = rep.intermediate.comparison_ode4 >= -a.slack &&
                    rep.intermediate.change_var4 >= -a.slack &&
                    rep.intermediate.comparison_ode6 >= -a.slack &&
                    rep.deficit_proof / rep.lhs >= -a.slack &&
                    rep.holder_ub - rep.int_pm1 >= -1e-12 * rep.holder_ub;
    return ok ? exit_ok : exit_inequality;
}

struct LambdaStarArgs {
    int n = 2;
    double p = 2.0;
    double rho = 1.0;
    int grid_points = 2048;
    std::string out = ".";
    std::string prefix;
    std::string config;
};

int cmd_lambda_star(LambdaStarArgs a, const ConfigMerge& cfg) {
    cfg.fallback("n", a.n);
    cfg.fallback("p", a.p);
    cfg.fallback("rho", a.rho);
    cfg.fallback("grid-points", a.grid_points);

    const auto res = sobex::solve_lambda_star(a.n, a.p, a.rho, a.grid_points);
    namespace fs = std::filesystem;
    fs::create_directories(a.out);
    const std::string prefix = a.prefix.empty()
                                   ? "lambda_star_n" + std::to_string(a.n) + "_p" + trim_num(a.p)
                                   : a.prefix;
    const std::string json = sobex::io::lambda_star_json(res);
    sobex::io::write_file((fs::path(a.out) / (prefix + ".json")).string(), json);
    std::cout << json << "\n";
    return exit_ok;
}

struct SweepArgs {
    std::string config;
    std::string out = "sweep.csv";
    int jobs = 0;
};

struct SweepCase {
    std::string case_id;
    nlohmann::json domain;
    double p = 2.0;
};

int cmd_sweep(const SweepArgs& a) {
    std::ifstream in(a.config);
    if (!in)
        throw sobex::Error(sobex::errc::config_error, "cannot open sweep config " + a.config);
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw sobex::Error(sobex::errc::config_error, std::string("bad sweep JSON: ") + e.what());
    }
    const auto domains = cfg.value("domains", nlohmann::json::array());
    const auto plist = cfg.value("p", nlohmann::json::array());
    const double h = cfg.value("h", 1.0 / 128);
    const int levels_grid = cfg.value("levels", 256);
    const int levels_radial = cfg.value("levels_radial", 1000);
    const int samples = cfg.value("samples", 10000);
    const int grid_points = cfg.value("grid_points", 2048);

    std::vector<SweepCase> cases;
    for (const auto& dom : domains) {
        for (const auto& pv : plist) {
            SweepCase c;
            c.domain = dom;
            c.p = pv.get<double>();
            c.case_id = "case" + std::to_string(cases.size());
            cases.push_back(std::move(c));
        }
    }

    int jobs = a.jobs;
    if (jobs <= 0) {
        const char* env = std::getenv("SOBEX_JOBS");
        jobs = env != nullptr ? std::max(1, std::atoi(env)) : 1;
    }
    jobs = std::min<int>(jobs, std::max<size_t>(1, cases.size()));

    std::vector<std::string> rows(cases.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const size_t idx = cursor.fetch_add(1);
            if (idx >= cases.size())
                return;
            const auto& c = cases[idx];
            try {
                const sobex::Domain d = sobex::io::domain_from_json_text(c.domain.dump());
                sobex::InequalityReport rep;
                if (d.kind == sobex::DomainKind::ball) {
                    rep = sobex::run_ball_case(d.n, c.p, d.radius, samples, levels_radial,
                                               grid_points)
                              .report;
                } else {
                    rep = sobex::run_domain_case(d, c.p, h, levels_grid, grid_points).report;
                }
                rows[idx] = sobex::io::sweep_csv_row(c.case_id, rep, "ok");
            } catch (const sobex::Error& e) {
                rows[idx] = sobex::io::sweep_csv_error_row(c.case_id, sobex::errc_name(e.code()));
            } catch (const std::exception&) {
                rows[idx] = sobex::io::sweep_csv_error_row(c.case_id, "internal-error");
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    std::string csv = sobex::io::sweep_csv_header();
    for (const auto& r : rows)
        csv += r;
    sobex::io::write_file(a.out, csv);
    std::cout << csv;
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"extremal Sobolev functions and the reverse-Holder inequality report"};
    app.set_help_flag("--help", "print help"); // keep -h free for grid spacing
    app.require_subcommand(1);

    BallArgs ball;
    auto* cb = app.add_subcommand("ball", "radial pipeline on a ball in R^n");
    cb->add_option("-n,--n", ball.n, "dimension");
    cb->add_option("-p,--p", ball.p, "exponent");
    cb->add_option("-r,--rho", ball.rho, "ball radius");
    cb->add_option("--samples", ball.samples, "profile samples");
    cb->add_option("--levels", ball.levels, "level-set samples");
    cb->add_option("--grid-points", ball.grid_points, "lambda-star grid");
    cb->add_option("--tol", ball.tol, "shooting tolerance");
    cb->add_option("--slack", ball.slack, "ball-equality tolerance on |deficit|/lhs");
    cb->add_option("--out", ball.out, "output directory");
    cb->add_option("--prefix", ball.prefix, "output file prefix");
    cb->add_option("--config", ball.config, "JSON config file (flags override)");

    DomainArgs dom;
    auto* cd = app.add_subcommand("domain", "grid pipeline on a planar domain spec");
    cd->set_help_flag("--help", "print help");
    cd->add_option("spec", dom.spec, "domain spec JSON file")->required();
    cd->add_option("-p,--p", dom.p, "exponent");
    cd->add_option("-h,--h", dom.h, "grid spacing");
    cd->add_option("--levels", dom.levels, "level-set samples");
    cd->add_option("--grid-points", dom.grid_points, "lambda-star grid");
    cd->add_option("--flow-tol", dom.flow_tol, "flow stopping tolerance");
    cd->add_option("--slack", dom.slack, "allowed negative margin (discretization)");
    cd->add_option("--out", dom.out, "output directory");
    cd->add_option("--prefix", dom.prefix, "output file prefix");
    cd->add_option("--config", dom.config, "JSON config file (flags override)");

    LambdaStarArgs lst;
    auto* cl = app.add_subcommand("lambda-star", "1-D variational problem on [0, rho_M]");
    cl->add_option("-n,--n", lst.n, "dimension");
    cl->add_option("-p,--p", lst.p, "exponent");
    cl->add_option("-r,--rho", lst.rho, "interval length rho_M");
    cl->add_option("--grid-points", lst.grid_points, "grid points");
    cl->add_option("--out", lst.out, "output directory");
    cl->add_option("--prefix", lst.prefix, "output file prefix");
    cl->add_option("--config", lst.config, "JSON config file (flags override)");

    SweepArgs sw;
    auto* cs = app.add_subcommand("sweep", "run a case table from a JSON config");
    cs->add_option("config", sw.config, "sweep config JSON")->required();
    cs->add_option("--out", sw.out, "output CSV path");
    cs->add_option("--jobs", sw.jobs, "concurrent cases (default SOBEX_JOBS or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    try {
        if (cb->parsed()) {
            ConfigMerge cfg(cb);
            cfg.load(ball.config);
            return cmd_ball(ball, cfg);
        }
        if (cd->parsed()) {
            ConfigMerge cfg(cd);
            cfg.load(dom.config);
            return cmd_domain(dom, cfg);
        }
        if (cl->parsed()) {
            ConfigMerge cfg(cl);
            cfg.load(lst.config);
            return cmd_lambda_star(lst, cfg);
        }
        if (cs->parsed())
            return cmd_sweep(sw);
    } catch (const sobex::Error& e) {
        print_error(e);
        return exit_code_for(e);
    } catch (const std::exception& e) {
        sobex::io::Json j;
        j.str("error", "internal-error");
        j.str("message", e.what());
        std::cout << j.dump() << "\n";
        return exit_solver;
    }
    return exit_config;
}
