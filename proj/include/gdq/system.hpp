#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gdq/errors.hpp"

namespace gdq {

/// Validated definition of a Markov-type measure on a ratio-specified
/// graph-directed construction: a row-stochastic transition matrix P with
/// row fan-out >= 2, contraction ratios C supported exactly where P is, a
/// strictly positive initial distribution chi, and the quantization order r.
///
/// Immutable after construction and safe to share across threads.
class MarkovSystem {
public:
    static constexpr double kStochasticTol = 1e-12;

    /// Validates the raw arrays and builds the system. Collects every violated
    /// invariant and throws a single ValidationError listing all of them.
    static MarkovSystem validate(const std::vector<std::vector<double>>& transition,
                                 const std::vector<std::vector<double>>& ratios,
                                 const std::vector<double>& initial, double order_r) {
        auto violations = check(transition, ratios, initial, order_r);
        if (!violations.empty()) throw ValidationError(std::move(violations));
        return MarkovSystem(transition, ratios, initial, order_r);
    }

    /// Non-throwing validation; returns the full list of violations (empty on success).
    static std::vector<Violation> check(const std::vector<std::vector<double>>& transition,
                                        const std::vector<std::vector<double>>& ratios,
                                        const std::vector<double>& initial, double order_r) {
        std::vector<Violation> out;
        const std::size_t n = transition.size();
        if (n < 2) {
            out.push_back({errc::bad_shape, "vertex count must be at least 2, got " + std::to_string(n)});
            return out;
        }
        bool shape_ok = ratios.size() == n && initial.size() == n;
        for (const auto& row : transition) shape_ok = shape_ok && row.size() == n;
        for (const auto& row : ratios) shape_ok = shape_ok && row.size() == n;
        if (!shape_ok) {
            out.push_back({errc::bad_shape, "transition and ratios must be NxN, initial length N"});
            return out;
        }
        if (!(order_r > 0.0) || !std::isfinite(order_r)) {
            out.push_back({errc::bad_config, "order r must be a positive real"});
        }
        for (std::size_t i = 0; i < n; ++i) {
            double row_sum = 0.0;
            std::size_t fan_out = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p = transition[i][j];
                const double c = ratios[i][j];
                if (p < 0.0 || p > 1.0 || !std::isfinite(p)) {
                    out.push_back({errc::row_not_stochastic,
                                   "p[" + ij(i, j) + "] = " + std::to_string(p) + " outside [0,1]"});
                }
                row_sum += p;
                if (p > 0.0) ++fan_out;
                if ((c > 0.0) != (p > 0.0)) {
                    out.push_back({errc::ratio_support_mismatch,
                                   "c[" + ij(i, j) + "] positive iff p[" + ij(i, j) + "] positive is violated"});
                }
                if (p > 0.0 && !(c > 0.0 && c < 1.0)) {
                    out.push_back({errc::ratio_out_of_range,
                                   "c[" + ij(i, j) + "] = " + std::to_string(c) + " outside (0,1)"});
                }
            }
            if (std::fabs(row_sum - 1.0) > kStochasticTol) {
                out.push_back({errc::row_not_stochastic,
                               "row " + std::to_string(i + 1) + " sums to " + std::to_string(row_sum)});
            }
            if (fan_out < 2) {
                out.push_back({errc::fan_out_below_two,
                               "row " + std::to_string(i + 1) + " has " + std::to_string(fan_out) +
                                   " positive entries, need >= 2"});
            }
        }
        double chi_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(initial[i] > 0.0) || initial[i] > 1.0) {
                out.push_back({errc::initial_not_positive_probability,
                               "chi[" + std::to_string(i + 1) + "] = " + std::to_string(initial[i]) +
                                   " outside (0,1]"});
            }
            chi_sum += initial[i];
        }
        if (std::fabs(chi_sum - 1.0) > kStochasticTol) {
            out.push_back({errc::initial_not_positive_probability,
                           "chi sums to " + std::to_string(chi_sum)});
        }
        return out;
    }

    std::size_t size() const { return n_; }
    double order() const { return r_; }

    double transition(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }
    double ratio(std::size_t i, std::size_t j) const { return c_[i * n_ + j]; }
    double initial(std::size_t i) const { return chi_[i]; }

    bool edge(std::size_t i, std::size_t j) const { return p_[i * n_ + j] > 0.0; }

    /// Successors of i in ascending order (the support of row i).
    const std::vector<std::uint32_t>& successors(std::size_t i) const { return succ_[i]; }

    double log_transition(std::size_t i, std::size_t j) const { return log_p_[i * n_ + j]; }
    double log_ratio(std::size_t i, std::size_t j) const { return log_c_[i * n_ + j]; }

    /// log(p_ij c_ij^r), the per-edge decrement of log(p_sigma c_sigma^r).
    double edge_log_weight(std::size_t i, std::size_t j) const {
        return log_p_[i * n_ + j] + r_ * log_c_[i * n_ + j];
    }

    double p_min() const { return p_min_; }
    double p_max() const { return p_max_; }
    double c_min() const { return c_min_; }
    double c_max() const { return c_max_; }

    /// eta = p_min * c_min^r, the antichain threshold base of the Lambda levels.
    double eta() const { return std::exp(log_eta_); }

    /// log(eta) = log(p_min) + r log(c_min). Built from the same expression used
    /// for edge weights so exact ties resolve consistently in log space.
    double log_eta() const { return log_eta_; }

    /// log(p_max c_max^r), used for the N1 bound of the refinement lemma.
    double log_weight_max() const { return std::log(p_max_) + r_ * std::log(c_max_); }

private:
    MarkovSystem(const std::vector<std::vector<double>>& transition,
                 const std::vector<std::vector<double>>& ratios,
                 const std::vector<double>& initial, double order_r)
        : n_(transition.size()), r_(order_r) {
        p_.resize(n_ * n_);
        c_.resize(n_ * n_);
        log_p_.assign(n_ * n_, -std::numeric_limits<double>::infinity());
        log_c_.assign(n_ * n_, -std::numeric_limits<double>::infinity());
        chi_ = initial;
        succ_.resize(n_);
        p_min_ = 1.0;
        c_min_ = 1.0;
        p_max_ = 0.0;
        c_max_ = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const double p = transition[i][j];
                const double c = ratios[i][j];
                p_[i * n_ + j] = p;
                c_[i * n_ + j] = c;
                if (p > 0.0) {
                    log_p_[i * n_ + j] = std::log(p);
                    log_c_[i * n_ + j] = std::log(c);
                    succ_[i].push_back(static_cast<std::uint32_t>(j));
                    p_min_ = std::min(p_min_, p);
                    p_max_ = std::max(p_max_, p);
                    c_min_ = std::min(c_min_, c);
                    c_max_ = std::max(c_max_, c);
                }
            }
        }
        log_eta_ = std::log(p_min_) + r_ * std::log(c_min_);
    }

    static std::string ij(std::size_t i, std::size_t j) {
        return std::to_string(i + 1) + "," + std::to_string(j + 1);
    }

    std::size_t n_;
    double r_;
    std::vector<double> p_, c_, log_p_, log_c_, chi_;
    std::vector<std::vector<std::uint32_t>> succ_;
    double p_min_, p_max_, c_min_, c_max_;
    double log_eta_;
};

} // namespace gdq
