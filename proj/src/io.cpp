#include "sobex/io.hpp"

#include "sobex/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sobex::io {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string json_num(double v) {
    if (std::isnan(v))
        return "null";
    if (std::isinf(v))
        return v > 0 ? "1e999" : "-1e999";
    return fmt17(v);
}

} // namespace

void Json::num(const std::string& key, double v) { fields_.emplace_back(key, json_num(v)); }
void Json::integer(const std::string& key, long v) {
    fields_.emplace_back(key, std::to_string(v));
}
void Json::str(const std::string& key, const std::string& v) {
    fields_.emplace_back(key, quote(v));
}
void Json::boolean(const std::string& key, bool v) {
    fields_.emplace_back(key, v ? "true" : "false");
}
void Json::raw(const std::string& key, const std::string& v) { fields_.emplace_back(key, v); }

std::string Json::dump(int indent) const {
    std::string pad(indent, ' ');
    std::string out = "{\n";
    for (size_t i = 0; i < fields_.size(); ++i) {
        out += pad + quote(fields_[i].first) + ": " + fields_[i].second;
        if (i + 1 < fields_.size())
            out += ",";
        out += "\n";
    }
    out += "}";
    return out;
}

std::string num_array(const std::vector<double>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        out += json_num(v[i]);
        if (i + 1 < v.size())
            out += ", ";
    }
    out += "]";
    return out;
}

Domain domain_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(errc::config_error, std::string("bad domain JSON: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    const auto params = j.value("params", nlohmann::json::object());
    try {
        if (kind == "ball") {
            const int n = j.value("n", 2);
            return Domain::ball(n, params.value("radius", 1.0));
        }
        if (kind == "rectangle")
            return Domain::rectangle(params.value("width", 1.0), params.value("height", 1.0));
        if (kind == "ellipse")
            return Domain::ellipse(params.value("a", 1.0), params.value("b", 1.0));
        if (kind == "polygon") {
            std::vector<std::array<double, 2>> verts;
            for (const auto& v : params.value("vertices", nlohmann::json::array()))
                verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
            return Domain::polygon(std::move(verts));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::config_error, std::string("bad domain params: ") + e.what());
    }
    throw Error(errc::config_error, "unknown domain kind '" + kind + "'");
}

Domain domain_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(errc::config_error, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return domain_from_json_text(ss.str());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out)
        throw Error(errc::config_error, "cannot write " + path);
    out << content;
}

std::string profile_csv(const RadialProfile& rp) {
    std::string out = "r,phi\n";
    for (size_t i = 0; i < rp.r.size(); ++i)
        out += fmt10(rp.r[i]) + "," + fmt10(rp.phi[i]) + "\n";
    return out;
}

std::string profile_header_json(const RadialProfile& rp) {
    Json j;
    j.integer("n", rp.n);
    j.num("p", rp.p);
    j.num("rho_M", rp.rho_M);
    j.num("lambda", rp.lambda);
    j.num("c_p", rp.c_p);
    j.num("sup_phi", rp.M);
    Json moments;
    for (const auto& [q, v] : rp.moments)
        moments.num(fmt17(q), v);
    j.raw("moments", moments.dump(4));
    return j.dump();
}

std::string levelset_csv(const LevelSetData& ls) {
    std::string out = "t,V,H,rho,perim\n";
    for (const auto& s : ls.samples) {
        out += fmt10(s.t) + "," + fmt10(s.V) + "," + fmt10(s.H) + "," + fmt10(s.rho) + ",";
        out += (s.perim >= 0.0 ? fmt10(s.perim) : std::string("")) + "\n";
    }
    return out;
}

std::string field_csv(const ScalarField& f) {
    std::string out = "i,j,value\n";
    for (int j = 0; j < f.mask.ny; ++j)
        for (int i = 0; i < f.mask.nx; ++i)
            if (f.mask.at(i, j))
                out += std::to_string(i) + "," + std::to_string(j) + "," + fmt10(f.at(i, j)) + "\n";
    return out;
}

std::string field_header_json(const ScalarField& f) {
    Json j;
    j.str("domain", f.domain_id);
    j.num("p", f.p);
    j.num("h", f.mask.h);
    j.integer("nx", f.mask.nx);
    j.integer("ny", f.mask.ny);
    j.num("x0", f.mask.x0);
    j.num("y0", f.mask.y0);
    j.integer("interior_cells", f.mask.count);
    j.num("quotient", f.quotient);
    j.num("lambda", f.lambda);
    j.integer("iterations", f.iterations);
    return j.dump();
}

std::string report_json(const InequalityReport& rep) {
    Json inputs;
    inputs.integer("n", rep.n);
    inputs.num("p", rep.p);
    inputs.str("domain", rep.domain_id);
    inputs.boolean("is_ball", rep.is_ball);
    inputs.num("volume", rep.volume);
    inputs.num("c_p", rep.c_p);
    inputs.num("c_p_star", rep.c_p_star);
    inputs.num("lambda", rep.lambda);
    inputs.num("int_phi_pm1", rep.int_pm1);
    inputs.num("int_phi_p", rep.int_p);
    inputs.num("I_V", rep.I_V);
    inputs.num("I_rho", rep.I_rho);
    inputs.num("lambda_star", rep.lambda_star);

    Json inter;
    inter.num("comparison_ode4", rep.intermediate.comparison_ode4);
    inter.num("change_var4", rep.intermediate.change_var4);
    inter.num("comparison_ode6", rep.intermediate.comparison_ode6);
    inter.num("comparison_ode5", rep.intermediate.comparison_ode5);

    Json j;
    j.raw("inputs", inputs.dump(4));
    j.num("lhs", rep.lhs);
    j.num("rhs_theorem", rep.rhs_theorem);
    j.num("rhs_proof", rep.rhs_proof);
    j.num("deficit_theorem", rep.deficit_theorem);
    j.num("deficit_proof", rep.deficit_proof);
    j.num("deficit_theorem_rel", rep.deficit_theorem / rep.lhs);
    j.num("deficit_proof_rel", rep.deficit_proof / rep.lhs);
    j.num("holder_ub", rep.holder_ub);
    j.num("holder_margin", rep.holder_ub - rep.int_pm1);
    j.raw("intermediate_margins", inter.dump(4));
    return j.dump();
}

std::string lambda_star_json(const LambdaStarResult& res) {
    Json j;
    j.integer("n", res.n);
    j.num("p", res.p);
    j.num("rho_M", res.rho_M);
    j.num("lambda_star", res.lambda_star);
    j.num("multiplier", res.multiplier);
    j.num("numerator", res.numerator);
    j.num("denominator", res.denominator);
    j.num("el_residual", res.el_residual);
    j.integer("iterations", res.iterations);
    j.integer("grid_points", static_cast<long>(res.rho.size()) - 1);
    j.raw("rho", num_array(res.rho));
    j.raw("f", num_array(res.f));
    return j.dump();
}

std::string sweep_csv_header() {
    return "case,domain,n,p,volume,c_p,c_p_star,lambda,lambda_star,int_phi_pm1,int_phi_p,"
           "lhs,rhs_proof,rhs_theorem,deficit_proof_rel,deficit_theorem_rel,holder_margin,"
           "ode4_margin,change_var4_margin,ode6_margin,ode5_margin,status\n";
}

std::string sweep_csv_row(const std::string& case_id, const InequalityReport& rep,
                          const std::string& status) {
    std::string out = case_id + "," + rep.domain_id + "," + std::to_string(rep.n) + "," +
                      fmt10(rep.p);
    for (double v : {rep.volume, rep.c_p, rep.c_p_star, rep.lambda, rep.lambda_star, rep.int_pm1,
                     rep.int_p, rep.lhs, rep.rhs_proof, rep.rhs_theorem,
                     rep.deficit_proof / rep.lhs, rep.deficit_theorem / rep.lhs,
                     rep.holder_ub - rep.int_pm1, rep.intermediate.comparison_ode4,
                     rep.intermediate.change_var4, rep.intermediate.comparison_ode6,
                     rep.intermediate.comparison_ode5})
        out += "," + fmt10(v);
    out += "," + status + "\n";
    return out;
}

std::string sweep_csv_error_row(const std::string& case_id, const std::string& status) {
    std::string out = case_id;
    for (int i = 0; i < 20; ++i)
        out += ",";
    out += status + "\n";
    return out;
}

} // namespace sobex::io
