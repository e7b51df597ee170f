#pragma once

#include "sobex/field.hpp"
#include "sobex/geometry.hpp"
#include "sobex/lambda_star.hpp"
#include "sobex/levelset.hpp"
#include "sobex/radial.hpp"
#include "sobex/report.hpp"

#include <string>
#include <vector>

namespace sobex::io {

// Deterministic serialization: floats at 17 significant digits in JSON,
// 10 in CSV; key and row order fixed by construction.

std::string fmt17(double v);
std::string fmt10(double v);

/// Ordered flat-ish JSON document builder.
class Json {
public:
    void num(const std::string& key, double v);
    void integer(const std::string& key, long v);
    void str(const std::string& key, const std::string& v);
    void boolean(const std::string& key, bool v);
    void raw(const std::string& key, const std::string& v); // pre-rendered value
    std::string dump(int indent = 2) const;

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

std::string num_array(const std::vector<double>& v);

Domain domain_from_json_text(const std::string& text);
Domain domain_from_json_file(const std::string& path);

void write_file(const std::string& path, const std::string& content);

std::string profile_csv(const RadialProfile& rp);
std::string profile_header_json(const RadialProfile& rp);
std::string levelset_csv(const LevelSetData& ls);
std::string field_csv(const ScalarField& f);
std::string field_header_json(const ScalarField& f);
std::string report_json(const InequalityReport& rep);
std::string lambda_star_json(const LambdaStarResult& res);

/// One flat CSV row per report; header() and row() stay in sync.
std::string sweep_csv_header();
std::string sweep_csv_row(const std::string& case_id, const InequalityReport& rep,
                          const std::string& status);
std::string sweep_csv_error_row(const std::string& case_id, const std::string& status);

} // namespace sobex::io
