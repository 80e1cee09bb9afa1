#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gdq {

/// Kahan compensated accumulator. Summation order is the caller's contract;
/// all library reductions feed it in lexicographic word order.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }

    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    double slope_stderr = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) {
        throw std::invalid_argument("least_squares: need two equal-length series of size >= 2");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("least_squares: degenerate abscissa");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
    if (n > 2) {
        fit.slope_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

/// Minimize a unimodal function on [lo, hi] to absolute abscissa tolerance.
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double tol) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    if (!(lo <= hi)) std::swap(lo, hi);
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Weighted median of positions sorted ascending: the smallest position whose
/// cumulative weight reaches half of the total. Minimizes sum w|x-a|.
inline double weighted_median(std::span<const double> pos, std::span<const double> w) {
    if (pos.empty() || pos.size() != w.size()) {
        throw std::invalid_argument("weighted_median: bad input");
    }
    double total = 0.0;
    for (double wi : w) total += wi;
    const double half = 0.5 * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        cum += w[i];
        if (cum >= half) return pos[i];
    }
    return pos.back();
}

/// Upper critical value of the chi-square distribution via the
/// Wilson-Hilferty cube approximation; adequate for df >= 3.
inline double chi_square_critical(double df, double p_level) {
    double z;
    if (p_level >= 0.9995) z = 3.290527;
    else if (p_level >= 0.999) z = 3.090232;
    else if (p_level >= 0.99) z = 2.326348;
    else if (p_level >= 0.95) z = 1.644854;
    else z = 0.0;
    const double a = 2.0 / (9.0 * df);
    const double t = 1.0 - a + z * std::sqrt(a);
    return df * t * t * t;
}

} // namespace gdq
