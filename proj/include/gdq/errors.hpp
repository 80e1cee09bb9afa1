#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gdq {

/// Error categories surfaced by the library. The CLI maps these to exit codes.
enum class errc {
    row_not_stochastic,
    fan_out_below_two,
    ratio_support_mismatch,
    ratio_out_of_range,
    initial_not_positive_probability,
    bad_shape,
    inadmissible_junction,
    cap_exceeded,
    non_convergence,
    trivial_component,
    unknown_component,
    incomplete_antichain,
    insufficient_levels,
    separation_infeasible,
    invalid_n,
    resolution_too_coarse,
    bad_config,
    io_error,
};

inline const char* to_string(errc c) {
    switch (c) {
        case errc::row_not_stochastic: return "RowNotStochastic";
        case errc::fan_out_below_two: return "FanOutBelowTwo";
        case errc::ratio_support_mismatch: return "RatioSupportMismatch";
        case errc::ratio_out_of_range: return "RatioOutOfRange";
        case errc::initial_not_positive_probability: return "InitialNotPositiveProbability";
        case errc::bad_shape: return "BadShape";
        case errc::inadmissible_junction: return "InadmissibleJunction";
        case errc::cap_exceeded: return "CapExceeded";
        case errc::non_convergence: return "NonConvergence";
        case errc::trivial_component: return "TrivialComponent";
        case errc::unknown_component: return "UnknownComponent";
        case errc::incomplete_antichain: return "IncompleteAntichain";
        case errc::insufficient_levels: return "InsufficientLevels";
        case errc::separation_infeasible: return "SeparationInfeasible";
        case errc::invalid_n: return "InvalidN";
        case errc::resolution_too_coarse: return "ResolutionTooCoarse";
        case errc::bad_config: return "BadConfig";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

/// One violated invariant found while validating a system definition.
struct Violation {
    errc code;
    std::string detail;
};

/// Thrown by MarkovSystem::validate; carries every violation, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations)
        : Error(violations.empty() ? errc::bad_config : violations.front().code,
                summarize(violations)),
          violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    static std::string summarize(const std::vector<Violation>& vs) {
        std::string s = std::to_string(vs.size()) + " invariant violation(s)";
        for (const auto& v : vs) {
            s += "\n  - ";
            s += to_string(v.code);
            s += ": ";
            s += v.detail;
        }
        return s;
    }

    std::vector<Violation> violations_;
};

class SeparationError : public Error {
public:
    SeparationError(int row, double max_feasible_t, const std::string& what)
        : Error(errc::separation_infeasible, what), row_(row), max_feasible_t_(max_feasible_t) {}

    int row() const noexcept { return row_; }
    double max_feasible_t() const noexcept { return max_feasible_t_; }

private:
    int row_;
    double max_feasible_t_;
};

} // namespace gdq
