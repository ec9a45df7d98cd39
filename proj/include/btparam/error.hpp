#pragma once

#include <stdexcept>
#include <string>

namespace btparam {

enum class errc {
    too_few_points,
    degenerate_edge,
    not_symmetric,
    triangle_violation,
    same_point,
    degenerate_span,
    no_convergence,
    bad_child_count,
    depth_exceeds_resolution,
    level_out_of_range,
    none_contained,
    bad_params,
    bad_constant,
    curve_too_large,
    parse_error,
    io_error,
    invalid_argument,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::too_few_points:           return "too_few_points";
        case errc::degenerate_edge:          return "degenerate_edge";
        case errc::not_symmetric:            return "not_symmetric";
        case errc::triangle_violation:       return "triangle_violation";
        case errc::same_point:               return "same_point";
        case errc::degenerate_span:          return "degenerate_span";
        case errc::no_convergence:           return "no_convergence";
        case errc::bad_child_count:          return "bad_child_count";
        case errc::depth_exceeds_resolution: return "depth_exceeds_resolution";
        case errc::level_out_of_range:       return "level_out_of_range";
        case errc::none_contained:           return "none_contained";
        case errc::bad_params:               return "bad_params";
        case errc::bad_constant:             return "bad_constant";
        case errc::curve_too_large:          return "curve_too_large";
        case errc::parse_error:              return "parse_error";
        case errc::io_error:                 return "io_error";
        case errc::invalid_argument:         return "invalid_argument";
    }
    return "unknown";
}

// Single exception type for the whole library; the code survives to the CLI
// boundary where it becomes the machine-readable error id.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }
    const char* code_name() const noexcept { return errc_name(code_); }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace btparam
