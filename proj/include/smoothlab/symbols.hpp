#pragma once

// Scalar spectral symbols of the difference and averaging operators. Every
// operator in the library acts diagonally on Fourier coefficients, so these
// little functions carry the actual mathematics; the rest is bookkeeping.
//
// Dictionary (theta = (k, delta) throughout):
//   forward difference  sum_v (-1)^v C(r,v) f(x + v delta)   ->  (1 - e^{i theta})^r
//   symmetric difference, order 2s, nodes x + (2s-2v) delta  ->  (2i sin theta)^{2s}
//   averaged difference int_0^1 (1-e^{i u theta})^r du       ->  psi_r(theta)
//   Steklov-type mean of order r and step h                  ->  steklov_symbol(k h, r)

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "smoothlab/quadrature.hpp"

namespace smoothlab {

using complex_t = std::complex<double>;

// g(z) = (e^{iz} - 1)/(iz), g(0) = 1.
inline complex_t expi_ratio(double z) {
    if (std::abs(z) < 1e-5) {
        // 1 + iz/2 - z^2/6 - i z^3/24 + z^4/120
        return {1.0 - z * z / 6.0 + z * z * z * z / 120.0, z / 2.0 - z * z * z / 24.0};
    }
    return (std::polar(1.0, z) - 1.0) / complex_t(0.0, z);
}

inline bool is_integer_order(double r) {
    return r == std::floor(r) && r >= 1.0 && r < 1e6;
}

// (1 - e^{i theta})^r; integer r by repeated multiplication, fractional r by
// the principal branch (consistent with the binomial-series difference).
inline complex_t forward_difference_symbol(double theta, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("difference order must be positive");
    const complex_t base = 1.0 - std::polar(1.0, theta);
    if (is_integer_order(r)) {
        complex_t acc = 1.0;
        for (int i = 0; i < static_cast<int>(r); ++i) acc *= base;
        return acc;
    }
    if (std::abs(base) == 0.0) return 0.0;
    return std::pow(base, r);
}

// (2i sin theta)^{order}, order a positive even integer. The underlying
// stencil uses nodes x + (order - 2v) delta, v = 0..order, so the symbol is
// real of sign (-1)^{order/2}.
inline complex_t symmetric_difference_symbol(double theta, int order) {
    if (order < 2 || order % 2 != 0)
        throw std::invalid_argument("symmetric difference order must be even and positive");
    const complex_t base(0.0, 2.0 * std::sin(theta));
    complex_t acc = 1.0;
    for (int i = 0; i < order; ++i) acc *= base;
    return acc;
}

// psi_r(t) = int_0^1 (1 - e^{iut})^r du. For integer r the binomial expansion
// gives 1 + sum_{v=1..r} (-1)^v C(r,v) (e^{ivt}-1)/(ivt); fractional orders
// fall back to oscillation-aware quadrature.
inline complex_t psi_linearized(double t, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("difference order must be positive");
    if (is_integer_order(r)) {
        const int ri = static_cast<int>(r);
        if (std::abs(t) < 0.5 && ri <= 64) {
            // the binomial form cancels O(1) terms down to O(t^r); factor the
            // zero out instead: psi_r(t) = (-it)^r int_0^1 u^r g(ut)^r du
            auto part = [&](bool re) {
                return quad::integrate(
                    [&](double u) {
                        complex_t g = expi_ratio(u * t), gp = 1.0;
                        for (int i = 0; i < ri; ++i) gp *= g;
                        complex_t val = std::pow(u, static_cast<double>(ri)) * gp;
                        return re ? val.real() : val.imag();
                    },
                    0.0, 1.0, 1e-14);
            };
            complex_t scale = 1.0;
            const complex_t mit(0.0, -t);
            for (int i = 0; i < ri; ++i) scale *= mit;
            return scale * complex_t(part(true), part(false));
        }
        complex_t acc = 1.0;
        for (int v = 1; v <= ri; ++v) {
            double sgn = (v % 2 == 0) ? 1.0 : -1.0;
            acc += sgn * quad::binomial(ri, v) * expi_ratio(v * t);
        }
        return acc;
    }
    // The integrand behaves like (-iut)^r near u = 0, an algebraic kink that
    // fixed rules miss: integrate the first oscillation adaptively, the rest
    // in period chunks.
    auto piece = [&](double lo, double hi, bool adaptive) -> complex_t {
        auto fr = [&](double u) { return forward_difference_symbol(u * t, r).real(); };
        auto fi = [&](double u) { return forward_difference_symbol(u * t, r).imag(); };
        if (adaptive)
            return {quad::integrate(fr, lo, hi, 1e-13), quad::integrate(fi, lo, hi, 1e-13)};
        double freq = std::abs(t) * (std::floor(r) + 1.0);
        return {quad::integrate_oscillatory(fr, lo, hi, freq),
                quad::integrate_oscillatory(fi, lo, hi, freq)};
    };
    const double split =
        std::min(1.0, std::numbers::pi_v<double> / std::max(std::abs(t), 1e-12));
    complex_t acc = piece(0.0, split, true);
    if (split < 1.0) acc += piece(split, 1.0, false);
    return acc;
}

// The anchor coefficient lambda(t) = psi_1(t)/psi_2(t) written out:
//   2 (it + 1 - e^{it}) / (2it + 3 - 4 e^{it} + e^{2it}).
// The denominator vanishes to third order at t = 0 (|lambda| ~ 3/(2|t|)), so
// tiny arguments are rejected rather than computed with total cancellation.
inline complex_t lambda_anchor(double t) {
    if (std::abs(t) < 1e-4)
        throw std::domain_error("lambda_anchor: argument too close to zero");
    const complex_t it(0.0, t);
    const complex_t eit = std::polar(1.0, t);
    const complex_t num = 2.0 * (it + 1.0 - eit);
    const complex_t den = 2.0 * it + 3.0 - 4.0 * eit + std::polar(1.0, 2.0 * t);
    return num / den;
}

// Symbol of the Steklov-type mean f_{r,h}: with g = expi_ratio,
//   sigma_r(t) = sum_{v=1..r} (-1)^{v+1} C(r,v) g(v t)^r,  t = k h.
// r = 1 reduces to the classical moving average (1/h) int_0^h f(x+u) du.
inline complex_t steklov_symbol(double t, int r) {
    if (r < 1) throw std::invalid_argument("Steklov order must be >= 1");
    complex_t acc = 0.0;
    for (int v = 1; v <= r; ++v) {
        double sgn = (v % 2 == 0) ? -1.0 : 1.0;
        complex_t g = expi_ratio(v * t);
        complex_t gp = 1.0;
        for (int i = 0; i < r; ++i) gp *= g;
        acc += sgn * quad::binomial(r, v) * gp;
    }
    return acc;
}

}  // namespace smoothlab
