#pragma once

// Quadrature and sampling helpers shared by the moduli, summation and
// transition-function code. Oscillatory integrands get period-length chunks
// with fixed Gauss rules; everything else goes through adaptive
// Gauss-Kronrod from Boost.Math.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace smoothlab::quad {

using complex_t = std::complex<double>;

// Adaptive integration on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-11) {
    if (!(a < b)) throw std::invalid_argument("quad::integrate: need a < b");
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, 15, tol);
}

// Fixed-rule integration over [a,b] in chunks no longer than half an
// oscillation period of the given frequency. Each chunk then holds well under
// one period and the 15-point Gauss rule resolves it to round-off. Works for
// integrands with an additional smooth monotone factor (u^{-q} and the like).
template <class F>
double integrate_oscillatory(F&& f, double a, double b, double freq) {
    if (!(a < b)) throw std::invalid_argument("quad::integrate_oscillatory: need a < b");
    const double eff = std::max(std::abs(freq), 0.5);
    const double max_len = std::numbers::pi_v<double> / (2.0 * eff);
    const int chunks = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
    const double len = (b - a) / chunks;
    using rule = boost::math::quadrature::gauss<double, 15>;
    double acc = 0.0;
    for (int i = 0; i < chunks; ++i) {
        double lo = a + i * len;
        acc += rule::integrate(f, lo, lo + len);
    }
    return acc;
}

template <class F>
complex_t integrate_oscillatory_complex(F&& f, double a, double b, double freq) {
    auto re = [&](double u) { return f(u).real(); };
    auto im = [&](double u) { return f(u).imag(); };
    return {integrate_oscillatory(re, a, b, freq), integrate_oscillatory(im, a, b, freq)};
}

// Binomial coefficient for small integer arguments, exact in double range.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

// sin(z)/z with the removable singularity handled.
inline double sinc(double z) {
    if (std::abs(z) < 1e-6) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

// Closed forms for the even-power sine averages that appear in measure
// weighted differences. All come from expanding
//   sin^{2r} t = 4^{-r} [ C(2r,r) + 2 sum_{m=1..r} (-1)^m C(2r,r-m) cos(2mt) ].

// mean over [0,1]: int_0^1 sin^{2r}(a u) du
inline double mean_sin_power_segment(int r, double a) {
    double acc = binomial(2 * r, r);
    for (int m = 1; m <= r; ++m) {
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        acc += 2.0 * sgn * binomial(2 * r, r - m) * sinc(2.0 * m * a);
    }
    return std::ldexp(acc, -2 * r);  // * 4^{-r}
}

// int_0^{2pi} sin^{2r}(b cos t) dt, via int_0^{2pi} cos(z cos t) dt = 2 pi J_0(z)
inline double angular_sin_power(int r, double b) {
    double acc = binomial(2 * r, r);
    for (int m = 1; m <= r; ++m) {
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        acc += 2.0 * sgn * binomial(2 * r, r - m) * std::cyl_bessel_j(0.0, 2.0 * m * b);
    }
    return 2.0 * std::numbers::pi_v<double> * std::ldexp(acc, -2 * r);
}

// int_{-1}^{1} sin^{2r}(b c) dc (spherical reduction in three dimensions)
inline double diameter_sin_power(int r, double b) {
    double acc = 2.0 * binomial(2 * r, r);
    for (int m = 1; m <= r; ++m) {
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        acc += 4.0 * sgn * binomial(2 * r, r - m) * sinc(2.0 * m * b);
    }
    return std::ldexp(acc, -2 * r);
}

// Van der Corput radical inverse; halton(i, base) for deterministic
// low-discrepancy sampling (bases should be distinct small primes).
inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0, result = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        result += f * static_cast<double>(index % base);
        index /= base;
    }
    return result;
}

}  // namespace smoothlab::quad
