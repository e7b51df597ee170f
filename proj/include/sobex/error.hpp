#pragma once

#include <stdexcept>
#include <string>

namespace sobex {

enum class errc {
    invalid_dimension,
    invalid_measure,
    invalid_geometry,
    subcriticality_violation,
    no_zero_found,
    resolution_too_coarse,
    flow_stalled,
    undefined_quotient,
    no_solution,
    unsupported_source,
    inconsistent_inputs,
    nonconvergence,
    config_error,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace sobex
