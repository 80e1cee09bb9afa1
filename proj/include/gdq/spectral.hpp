#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gdq/detail/scc.hpp"
#include "gdq/errors.hpp"
#include "gdq/graph.hpp"
#include "gdq/matrix.hpp"
#include "gdq/system.hpp"

namespace gdq {

/// A(s) with entries (p_ij c_ij^r)^s on the edge set and 0 elsewhere
/// (0^0 is 1 only on present edges, so s = 0 yields the adjacency matrix).
/// Restricting to a vertex subset yields the block A_{H,s}.
inline Matrix build_matrix(const MarkovSystem& sys, double s) {
    const std::size_t n = sys.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t j : sys.successors(i)) {
            m(i, j) = std::exp(s * sys.edge_log_weight(i, j));
        }
    }
    return m;
}

inline Matrix build_matrix(const MarkovSystem& sys, double s, std::span<const int> subset) {
    Matrix m(subset.size(), subset.size());
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = 0; b < subset.size(); ++b) {
            const auto i = static_cast<std::size_t>(subset[a]);
            const auto j = static_cast<std::size_t>(subset[b]);
            if (sys.edge(i, j)) m(a, b) = std::exp(s * sys.edge_log_weight(i, j));
        }
    }
    return m;
}

/// A_{G,s} with entries b_ij(s) = (p_ij c_ij^r)^{s/(s+r)}.
inline Matrix quantization_matrix(const MarkovSystem& sys, double s) {
    return build_matrix(sys, s / (s + sys.order()));
}

inline Matrix quantization_matrix(const MarkovSystem& sys, double s, std::span<const int> subset) {
    return build_matrix(sys, s / (s + sys.order()), subset);
}

struct PowerIterationResult {
    double radius = 0.0;
    std::vector<double> eigenvector; // positive, sums to 1
    std::size_t iterations = 0;
};

/// Power iteration on (A + shift I); the shift makes the dominant eigenvalue
/// strictly dominant in modulus for periodic matrices, and the radius is
/// recovered by subtracting it. Stops when the Collatz-Wielandt bracket
/// min_i (Bv)_i/v_i <= rho(B) <= max_i (Bv)_i/v_i closes to `tol` relative
/// width; for irreducible input this is a certified enclosure.
inline PowerIterationResult power_iteration(const Matrix& a, double tol,
                                            std::size_t max_iter = 100'000, double shift = 1.0) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n) throw std::invalid_argument("power_iteration: square matrix required");
    if (n == 1) return {a(0, 0), {1.0}, 0};
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        std::vector<double> w = a.apply(v);
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] += shift * v[i];
            const double ratio = w[i] / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            sum += w[i];
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / sum;
        if (hi - lo <= tol * hi) {
            return {0.5 * (lo + hi) - shift, std::move(v), iter};
        }
    }
    throw Error(errc::non_convergence,
                "power iteration did not close the bracket in " + std::to_string(max_iter) +
                    " iterations (tol too tight?)");
}

namespace detail {

inline std::vector<std::vector<int>> support_adjacency(const Matrix& a) {
    std::vector<std::vector<int>> adj(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) > 0.0) adj[i].push_back(static_cast<int>(j));
        }
    }
    return adj;
}

} // namespace detail

/// Perron root of a nonnegative matrix. Reducible input is permuted to its
/// irreducible diagonal blocks (the factor theorem) and each block is handled
/// by shifted power iteration; the radius is the max over blocks. A direct
/// full-matrix power iteration cannot reach tight tolerances when the Perron
/// root repeats across comparable blocks (defective case), the block route
/// stays geometric.
inline double spectral_radius(const Matrix& a, double tol, std::size_t max_iter = 100'000) {
    if (a.rows() != a.cols()) throw std::invalid_argument("spectral_radius: square matrix required");
    const auto comps = detail::strongly_connected_components(detail::support_adjacency(a));
    double radius = 0.0;
    for (const auto& comp : comps) {
        if (comp.size() == 1) {
            const auto v = static_cast<std::size_t>(comp[0]);
            radius = std::max(radius, a(v, v));
            continue;
        }
        radius = std::max(radius, power_iteration(a.submatrix(comp), tol, max_iter).radius);
    }
    return radius;
}

/// Psi_G(s) (or Psi_H on a subset): spectral radius of the quantization matrix.
inline double psi_value(const MarkovSystem& sys, double s, double tol = 1e-13) {
    return spectral_radius(quantization_matrix(sys, s), tol);
}

inline double psi_value(const MarkovSystem& sys, double s, std::span<const int> subset,
                        double tol = 1e-13) {
    return spectral_radius(quantization_matrix(sys, s, subset), tol);
}

namespace detail {

/// Unique root of a continuous strictly decreasing psi with psi(0) >= 1,
/// by bracketed bisection. Returns 0 when psi(0) is already at 1 (bare-cycle
/// blocks, whose root sits at the boundary).
template <class Psi>
double descending_root(Psi&& psi, double upper_seed, double tol) {
    double lo = 0.0;
    const double f0 = psi(0.0);
    if (f0 < 1.0 - 1e-9) {
        throw std::logic_error("descending_root: psi(0) < 1 contradicts fan-out/connectivity");
    }
    if (f0 <= 1.0) return 0.0;
    double hi = upper_seed > 0.0 ? upper_seed : 1.0;
    int guard = 0;
    while (psi(hi) >= 1.0) {
        hi *= 2.0;
        if (++guard > 200) throw Error(errc::non_convergence, "no upper bracket for the root");
    }
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * (1.0 + mid)) return mid;
        if (psi(mid) >= 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

} // namespace detail

/// The unique s_r > 0 with Psi_G(s_r) = 1, by bisection on the strictly
/// decreasing Psi_G; the bracket opens at [0, r] and doubles upward.
inline double solve_sr(const MarkovSystem& sys, double tol = 1e-12) {
    const double psi_tol = std::max(1e-13, tol / 10.0);
    const double f0 = psi_value(sys, 0.0, psi_tol);
    // Fan-out >= 2 guarantees Psi_G(0) >= 2.
    if (f0 < 2.0 - 1e-9) {
        throw std::logic_error("Psi_G(0) < 2 on a validated system");
    }
    return detail::descending_root([&](double s) { return psi_value(sys, s, psi_tol); },
                                   sys.order(), tol);
}

/// Per-component root s_r(H). Throws TrivialComponent for a singleton without
/// a self-loop (a 1x1 null block has no root). Returns 0 for blocks whose
/// Perron root at s = 0 is already 1 (bare cycles).
inline double solve_sr(const MarkovSystem& sys, std::span<const int> subset, double tol = 1e-12) {
    if (subset.empty()) throw Error(errc::trivial_component, "empty vertex subset");
    if (subset.size() == 1 &&
        !sys.edge(static_cast<std::size_t>(subset[0]), static_cast<std::size_t>(subset[0]))) {
        throw Error(errc::trivial_component,
                    "vertex " + std::to_string(subset[0] + 1) + " has no self-loop: 1x1 null block");
    }
    const double psi_tol = std::max(1e-13, tol / 10.0);
    return detail::descending_root([&](double s) { return psi_value(sys, s, subset, psi_tol); },
                                   sys.order(), tol);
}

/// Root k_r of sum_i (q_i s_i^r)^{k/(k+r)} = 1 for a self-similar system
/// (identical-rows oracle of the degenerate single-class case).
inline double graf_luschgy_kr(std::span<const double> probabilities, std::span<const double> ratios,
                              double r, double tol = 1e-12) {
    if (probabilities.size() != ratios.size() || probabilities.empty()) {
        throw std::invalid_argument("graf_luschgy_kr: mismatched inputs");
    }
    std::vector<double> logw(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (!(probabilities[i] > 0.0) || !(ratios[i] > 0.0 && ratios[i] < 1.0)) {
            throw std::invalid_argument("graf_luschgy_kr: need q_i > 0 and s_i in (0,1)");
        }
        logw[i] = std::log(probabilities[i]) + r * std::log(ratios[i]);
    }
    auto value = [&](double k) {
        const double e = k / (k + r);
        double s = 0.0;
        for (double lw : logw) s += std::exp(e * lw);
        return s;
    };
    return detail::descending_root(value, r, tol);
}

/// det(I - A_{G,x}) evaluated through the strongly-connected block product of
/// the factor theorem; 1x1 null blocks contribute a factor of 1.
inline double det_i_minus_blocks(const MarkovSystem& sys, double x) {
    Matrix a = build_matrix(sys, x);
    const auto comps = detail::strongly_connected_components(detail::support_adjacency(a));
    double det = 1.0;
    for (const auto& comp : comps) {
        Matrix block = a.submatrix(comp);
        Matrix im = Matrix::identity(block.rows());
        for (std::size_t i = 0; i < block.rows(); ++i) {
            for (std::size_t j = 0; j < block.cols(); ++j) im(i, j) -= block(i, j);
        }
        det *= im.determinant();
    }
    return det;
}

enum class Classification {
    finite_upper_positive_lower, // M pairwise incomparable
    lower_coefficient_infinite,  // some pair in M comparable
};

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::finite_upper_positive_lower: return "FiniteUpperAndPositiveLower";
        case Classification::lower_coefficient_infinite: return "LowerCoefficientInfinite";
    }
    return "?";
}

struct ComponentSpectral {
    std::vector<int> vertices;     // 0-based ascending
    bool trivial = false;          // singleton without self-loop; no root exists
    double s_r_h = 0.0;            // NaN for trivial components
    bool in_m = false;
    // Populated for members of M only:
    std::vector<double> xi_right;  // right Perron eigenvector of A_{H, s_r}, sums to 1
    std::vector<double> w_left;    // left Perron eigenvector, sums to 1
    double delta1 = 0.0;           // 1 / max xi
    double delta2 = 0.0;           // 1 / min xi
};

struct SpectralReport {
    double s_r = 0.0;          // root over the full graph
    double s_r_blockmax = 0.0; // max over component roots (factor identity)
    double dimension = 0.0;    // D_r(mu) = s_r
    std::vector<ComponentSpectral> components;
    std::vector<int> class_m;  // indices into components
    Classification classification = Classification::finite_upper_positive_lower;
    std::optional<std::pair<double, double>> delta_bounds; // global, irreducible systems only
    double m1 = 0.0; // uniform per-vertex antichain-sum bounds over all blocks
    double m2 = 0.0;
    ComparabilityVerdict verdict;
    double tie_tolerance = 0.0;
};

struct ClassifyOptions {
    double root_tol = 1e-12;
    double tie_tol = 1e-7;  // relative tolerance for membership in M
    double cross_check_tol = 1e-8;
};

/// Full spectral classification: per-component roots, the global root (both
/// directly and as the block max, cross-checked), the class M, comparability,
/// Perron data for M, and the uniform antichain-sum bounds.
inline SpectralReport classify(const MarkovSystem& sys, const SccDecomposition& dec,
                               const ClassifyOptions& opt = {}) {
    SpectralReport rep;
    rep.tie_tolerance = opt.tie_tol;
    rep.s_r = solve_sr(sys, opt.root_tol);

    rep.s_r_blockmax = 0.0;
    for (std::size_t k = 0; k < dec.count(); ++k) {
        const auto& comp = dec.component(k);
        ComponentSpectral cs;
        cs.vertices = comp.vertices;
        cs.trivial = comp.trivial;
        if (comp.trivial) {
            cs.s_r_h = std::numeric_limits<double>::quiet_NaN();
        } else {
            cs.s_r_h = solve_sr(sys, comp.vertices, opt.root_tol);
            rep.s_r_blockmax = std::max(rep.s_r_blockmax, cs.s_r_h);
        }
        rep.components.push_back(std::move(cs));
    }
    if (std::fabs(rep.s_r - rep.s_r_blockmax) > opt.cross_check_tol * (1.0 + rep.s_r)) {
        throw std::logic_error("factor identity violated: global root != max of component roots");
    }
    rep.dimension = rep.s_r;

    for (std::size_t k = 0; k < rep.components.size(); ++k) {
        auto& cs = rep.components[k];
        if (cs.trivial) continue;
        if (rep.s_r - cs.s_r_h < opt.tie_tol * std::max(1.0, rep.s_r)) {
            cs.in_m = true;
            rep.class_m.push_back(static_cast<int>(k));
        }
    }

    // Perron data at the global exponent for members of M.
    const double psi_tol = std::max(1e-13, opt.root_tol / 10.0);
    for (int k : rep.class_m) {
        auto& cs = rep.components[static_cast<std::size_t>(k)];
        Matrix block = quantization_matrix(sys, rep.s_r, cs.vertices);
        auto right = power_iteration(block, psi_tol);
        auto left = power_iteration(block.transposed(), psi_tol);
        cs.xi_right = std::move(right.eigenvector);
        cs.w_left = std::move(left.eigenvector);
        double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
        for (double x : cs.xi_right) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
        cs.delta1 = 1.0 / xmax;
        cs.delta2 = 1.0 / xmin;
    }

    // Uniform antichain-sum bounds (each block at its own root).
    double m1 = std::numeric_limits<double>::infinity();
    double m2 = 0.0;
    for (const auto& cs : rep.components) {
        if (cs.trivial) continue;
        Matrix block = quantization_matrix(sys, cs.s_r_h, cs.vertices);
        auto zeta = power_iteration(block, psi_tol).eigenvector;
        double zmin = std::numeric_limits<double>::infinity(), zmax = 0.0;
        for (double z : zeta) {
            zmin = std::min(zmin, z);
            zmax = std::max(zmax, z);
        }
        m1 = std::min(m1, zmin / zmax);
        m2 = std::max(m2, 1.0 / zmin);
    }
    rep.m1 = m1;
    rep.m2 = m2;

    rep.verdict = comparability(sys, dec, rep.class_m);
    rep.classification = rep.verdict.all_incomparable()
                             ? Classification::finite_upper_positive_lower
                             : Classification::lower_coefficient_infinite;

    if (rep.components.size() == 1 && !rep.components[0].trivial) {
        rep.delta_bounds = {{rep.components[0].delta1, rep.components[0].delta2}};
    }
    return rep;
}

} // namespace gdq
