#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace pcsilab {

namespace detail {

inline double gamma_ln(double x) { return std::lgamma(x); }

/// Lower regularized incomplete gamma by series expansion.
inline double gamma_p_series(double a, double x) {
    double sum = 1.0 / a, term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gamma_ln(a));
}

/// Upper regularized incomplete gamma by continued fraction.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gamma_ln(a)) * h;
}

}  // namespace detail

/// Survival function of the chi-square distribution with dof degrees of
/// freedom: P(X >= x).
inline double chi_square_sf(double x, double dof) {
    if (x < 0 || dof <= 0) throw std::invalid_argument("chi_square_sf: bad arguments");
    if (x == 0) return 1.0;
    double a = dof / 2.0, hx = x / 2.0;
    if (hx < a + 1.0) return 1.0 - detail::gamma_p_series(a, hx);
    return detail::gamma_q_cf(a, hx);
}

}  // namespace pcsilab
