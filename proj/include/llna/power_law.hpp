#pragma once

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <vector>

namespace llna {

/// Hurwitz zeta function sum_{k>=0} (q+k)^-s for s > 1, q > 0, by
/// Euler-Maclaurin summation (relative error well below 1e-12).
inline double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw Error(ErrorKind::usage, "hurwitz_zeta requires s > 1 and q > 0");
    constexpr int direct_terms = 9;
    double sum = 0.0;
    for (int k = 0; k < direct_terms; ++k) sum += std::pow(q + k, -s);
    const double a = q + direct_terms;
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    // B_{2j} / (2j)!
    constexpr double bernoulli_over_factorial[] = {1.0 / 12.0,         -1.0 / 720.0,           1.0 / 30240.0,
                                                   -1.0 / 1209600.0,   1.0 / 47900160.0,       -691.0 / 1307674368000.0,
                                                   1.0 / 74724249600.0};
    double rising = s;             // s (s+1) ... (s+2j-2)
    double power = std::pow(a, -s - 1.0);  // a^{-s-2j+1}
    for (int j = 0; j < 7; ++j) {
        sum += bernoulli_over_factorial[j] * rising * power;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        power /= a * a;
    }
    return sum;
}

struct PowerLawFit {
    double gamma = std::numeric_limits<double>::quiet_NaN();
    std::size_t xmin = 0;
    double ks = 0.0;          // Kolmogorov-Smirnov distance at the chosen xmin
    std::size_t n_tail = 0;   // observations >= xmin
    bool reliable = false;    // false when there is no tail to fit
    bool continuous = false;  // continuous approximation was used
};

namespace detail {

template <typename F>
double golden_maximize(F f, double lo, double hi, double tol = 1e-9) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Power-law fit P(k) ~ k^-gamma following the Clauset-Shalizi-Newman recipe:
/// for each candidate xmin the exponent is the discrete maximum-likelihood
/// estimate on the tail k >= xmin, and the xmin with the smallest KS distance
/// wins. Candidates are the observed values (except the largest) whose tail
/// holds at least `min_tail` observations. With more than 1000 distinct
/// values the continuous approximation is used instead.
inline PowerLawFit fit_power_law(std::span<const std::size_t> observations, std::size_t min_tail = 10) {
    std::vector<std::size_t> x;
    x.reserve(observations.size());
    for (auto v : observations)
        if (v > 0) x.push_back(v);
    if (x.size() < 50)
        throw Error(ErrorKind::degenerate, "power-law fit needs at least 50 positive observations");
    std::sort(x.begin(), x.end());

    // distinct values with the number of observations >= value
    std::vector<std::size_t> values;
    std::vector<std::size_t> tail_count;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (i == 0 || x[i] != x[i - 1]) {
            values.push_back(x[i]);
            tail_count.push_back(x.size() - i);
        }

    PowerLawFit best;
    if (values.size() < 2) {
        best.xmin = values.front();
        best.n_tail = x.size();
        return best;
    }
    const bool continuous = values.size() > 1000;
    best.continuous = continuous;
    best.ks = std::numeric_limits<double>::infinity();

    // suffix sums of log x over the sorted observations
    std::vector<double> log_suffix(x.size() + 1, 0.0);
    for (std::size_t i = x.size(); i-- > 0;) log_suffix[i] = log_suffix[i + 1] + std::log(static_cast<double>(x[i]));

    for (std::size_t c = 0; c + 1 < values.size(); ++c) {
        const std::size_t n = tail_count[c];
        if (n < min_tail) break;
        const std::size_t first = x.size() - n;
        const double xmin = static_cast<double>(values[c]);
        double alpha;
        double ks = 0.0;
        if (continuous) {
            const double denom = log_suffix[first] - n * std::log(xmin - 0.5);
            alpha = 1.0 + n / denom;
            for (std::size_t v = c; v < values.size(); ++v) {
                const double emp = 1.0 - static_cast<double>(v + 1 < values.size() ? tail_count[v + 1] : 0) / n;
                const double model = 1.0 - std::pow((values[v] + 0.5) / (xmin - 0.5), 1.0 - alpha);
                ks = std::max(ks, std::abs(emp - model));
            }
        } else {
            const double sum_log = log_suffix[first];
            alpha = detail::golden_maximize(
                [&](double a) { return -static_cast<double>(n) * std::log(hurwitz_zeta(a, xmin)) - a * sum_log; },
                1.0001, 8.0);
            const double z = hurwitz_zeta(alpha, xmin);
            for (std::size_t v = c; v < values.size(); ++v) {
                const double emp = 1.0 - static_cast<double>(v + 1 < values.size() ? tail_count[v + 1] : 0) / n;
                const double model = 1.0 - hurwitz_zeta(alpha, static_cast<double>(values[v]) + 1.0) / z;
                ks = std::max(ks, std::abs(emp - model));
            }
        }
        if (ks < best.ks) {
            best.ks = ks;
            best.gamma = alpha;
            best.xmin = values[c];
            best.n_tail = n;
            best.reliable = true;
        }
    }
    if (!best.reliable) {
        best.ks = 0.0;
        best.xmin = values.front();
        best.n_tail = x.size();
    }
    return best;
}

}  // namespace llna
