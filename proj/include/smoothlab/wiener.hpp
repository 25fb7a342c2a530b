#pragma once

// Wiener-algebra toolkit: transition functions (1 - phi)/(1 - psi) with
// removable singularities patched by extrapolation, an A(R)-norm estimator for
// decaying profiles, the radial reduction/inversion pair, a nonvanishing scan
// for the averaged-difference symbols, and the one-sided oscillatory tail
// integrals behind the kernel-weighted modulus comparisons.
//
// Conventions: the A-norm of f is ||g||_{L1} where f(x) = int g(t) e^{ixt} dt.
// Restricting f to [-W, W] and rescaling to the torus turns that into the
// l1 sum of Fourier coefficients, which is what the estimator computes. The
// tail integrals are one-sided, over u >= 1; the symmetric variants are
// exactly twice as large since every integrand here is even.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smoothlab/multipliers.hpp"
#include "smoothlab/quadrature.hpp"
#include "smoothlab/spectral.hpp"
#include "smoothlab/symbols.hpp"

namespace smoothlab {

namespace detail {

// Neville extrapolation of fn(h) to h = 0 along h0, h0/2, h0/4, ...
inline complex_t extrapolate_to_zero(const std::function<complex_t(double)>& fn,
                                     double h0, int steps) {
    std::vector<complex_t> row(static_cast<std::size_t>(steps));
    std::vector<double> h(static_cast<std::size_t>(steps));
    for (int j = 0; j < steps; ++j) {
        h[j] = h0 * std::pow(0.5, j);
        row[j] = fn(h[j]);
        for (int k = j - 1; k >= 0; --k)
            row[k] = row[k + 1] + (row[k + 1] - row[k]) * (h[j] / (h[k] - h[j]));
    }
    return row[0];
}

}  // namespace detail

// g(x) = num(x)/den(x), with num = 1 - phi and den = 1 - psi for a pair of
// approximation-method profiles. The value at x = 0 (where both factors
// vanish) is either supplied or recovered by extrapolation along x -> 0.
struct TransitionFunction {
    std::function<complex_t(double)> num;  // 1 - phi
    std::function<complex_t(double)> den;  // 1 - psi
    std::optional<complex_t> value_at_zero;

    static TransitionFunction from_multipliers(MultiplierDescriptor phi,
                                               MultiplierDescriptor psi) {
        if (multiplier_dimension(phi) == 2 || multiplier_dimension(psi) == 2)
            throw std::invalid_argument("TransitionFunction: one-dimensional profiles only");
        TransitionFunction g;
        g.num = [phi = std::move(phi)](double x) {
            double xs[1] = {x};
            return complex_t(1.0) - evaluate(phi, std::span<const double>(xs, 1));
        };
        g.den = [psi = std::move(psi)](double x) {
            double xs[1] = {x};
            return complex_t(1.0) - evaluate(psi, std::span<const double>(xs, 1));
        };
        return g;
    }

    static TransitionFunction from_profiles(std::function<complex_t(double)> num,
                                            std::function<complex_t(double)> den,
                                            std::optional<complex_t> at_zero = {}) {
        return TransitionFunction{std::move(num), std::move(den), at_zero};
    }
};

inline complex_t transition_eval(const TransitionFunction& g, double x) {
    if (std::abs(x) < 1e-10) {
        if (g.value_at_zero) return *g.value_at_zero;
        return detail::extrapolate_to_zero(
            [&](double h) { return g.num(h) / g.den(h); }, 0.2, 10);
    }
    complex_t den = g.den(x);
    if (std::abs(den) < 1e-12) {
        complex_t num = g.num(x);
        if (std::abs(num) >= 1e-6)
            throw std::domain_error("transition_eval: pole of 1/(1 - psi) at x");
        // removable away from the origin: approach along a shrinking offset
        double h0 = 0.05 * std::max(1.0, std::abs(x));
        return detail::extrapolate_to_zero(
            [&](double h) { return g.num(x + h) / g.den(x + h); }, h0, 10);
    }
    return g.num(x) / den;
}

// A(R)-norm estimate of a profile restricted to [-W, W]: l1 sum of the
// Fourier coefficients of the rescaled restriction, reported for W and 2W.
// The decay precheck fits the 1/|x| envelope on the bulk and flags profiles
// whose tail escapes it; without decay the refinement sequence is
// meaningless and the flag says so.
struct ANormEstimate {
    double value = 0.0;     // estimate at the doubled window
    double previous = 0.0;  // estimate at the requested window
    bool converged = false;
    bool decay_ok = true;
};

inline ANormEstimate a_norm_estimate_1d(const std::function<complex_t(double)>& f,
                                        double window, int resolution = 4096) {
    if (!(window >= 4.0)) throw std::invalid_argument("a_norm_estimate_1d: window >= 4");
    int m = 8;
    while (m < resolution && m < (1 << 22)) m *= 2;

    auto estimate_at = [&](double w) {
        std::vector<complex_t> vals(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            vals[static_cast<std::size_t>(j)] = f(w * (2.0 * j / m - 1.0));
        auto spec = analyze(GridFunction(1, m, std::move(vals)));
        double acc = 0.0;
        for (const auto& c : spec.coeffs()) acc += std::abs(c);
        return acc;
    };

    ANormEstimate out;
    out.previous = estimate_at(window);
    out.value = estimate_at(2.0 * window);

    // envelope constant from the bulk, then the tail band must respect it
    double bulk = 0.0, tail = 0.0;
    for (int j = 0; j <= 256; ++j) {
        double xb = 1.0 + (window / 2.0 - 1.0) * j / 256.0;
        double xt = window / 2.0 + (window / 2.0) * j / 256.0;
        if (xb > 0.0) bulk = std::max({bulk, std::abs(f(xb)) * xb, std::abs(f(-xb)) * xb});
        tail = std::max({tail, std::abs(f(xt)) * xt, std::abs(f(-xt)) * xt});
    }
    out.decay_ok = tail <= 1.5 * bulk + 1e-9;
    double scale = std::max({out.value, out.previous, 1e-30});
    out.converged = out.decay_ok && std::abs(out.value - out.previous) < 0.01 * scale;
    return out;
}

// Upper-bound surrogate for the measure-algebra norm of a transition
// function: A-norm of g - g(inf) plus |g(inf)|, with g(inf) read off far
// outside the profiles' support.
struct BNormSurrogate {
    ANormEstimate smooth_part;
    complex_t limit_value = 0.0;
    double total = 0.0;
};

inline BNormSurrogate b_norm_surrogate(const TransitionFunction& g, double window,
                                       int resolution = 4096) {
    BNormSurrogate out;
    out.limit_value = (transition_eval(g, 0.7 * window) + transition_eval(g, 0.85 * window) +
                       transition_eval(g, -0.77 * window)) /
                      3.0;
    complex_t c = out.limit_value;
    out.smooth_part = a_norm_estimate_1d(
        [&g, c](double x) { return transition_eval(g, x) - c; }, window, resolution);
    out.total = out.smooth_part.value + std::abs(out.limit_value);
    return out;
}

// Radial profile: uniform samples of a function of t on [0, T], tagged with
// the dimension it came from. Evaluation interpolates linearly.
struct RadialProfile {
    double length = 1.0;
    int dim = 1;
    std::vector<double> samples;

    static RadialProfile tabulate(const std::function<double(double)>& fn, double length,
                                  int count, int dim) {
        if (!(length > 0.0) || count < 2)
            throw std::invalid_argument("RadialProfile: need length > 0 and count >= 2");
        RadialProfile p;
        p.length = length;
        p.dim = dim;
        p.samples.resize(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            p.samples[static_cast<std::size_t>(i)] = fn(length * i / (count - 1));
        return p;
    }

    double eval(double t) const {
        if (t < -1e-12 || t > length * (1.0 + 1e-12))
            throw std::out_of_range("RadialProfile::eval: argument outside [0, T]");
        double pos = std::clamp(t / length, 0.0, 1.0) * (samples.size() - 1);
        std::size_t lo = std::min(static_cast<std::size_t>(pos), samples.size() - 2);
        double w = pos - static_cast<double>(lo);
        return samples[lo] * (1.0 - w) + samples[lo + 1] * w;
    }
};

enum class RadialDirection { reduce, invert };

// reduce: F0(t) = int_0^1 f0(ut) (1-u^2)^{(d-3)/2} du. In three dimensions the
// weight is 1 and t F0(t) is the running integral of f0, which the sampled
// representation computes exactly (trapezoid on the piecewise-linear
// interpolant). invert recovers f0(t) = (t F0(t))' by centered differencing;
// it exists here for d = 3 only (even dimensions would need half-order
// differentiation). d = 1 is the identity both ways.
inline RadialProfile radial_transform(const RadialProfile& p, int d, RadialDirection dir) {
    if (p.samples.size() < 3)
        throw std::invalid_argument("radial_transform: profile too short");
    if (d == 1) return p;
    const int count = static_cast<int>(p.samples.size());
    const double step = p.length / (count - 1);
    RadialProfile out = p;
    out.dim = d;

    if (dir == RadialDirection::reduce) {
        if (d == 3) {
            // cumulative trapezoid of the interpolant, then divide by t
            std::vector<double> running(p.samples.size(), 0.0);
            for (int i = 1; i < count; ++i)
                running[static_cast<std::size_t>(i)] =
                    running[static_cast<std::size_t>(i - 1)] +
                    0.5 * step * (p.samples[static_cast<std::size_t>(i - 1)] +
                                  p.samples[static_cast<std::size_t>(i)]);
            out.samples[0] = p.samples[0];
            for (int i = 1; i < count; ++i)
                out.samples[static_cast<std::size_t>(i)] =
                    running[static_cast<std::size_t>(i)] / (step * i);
            return out;
        }
        if (d == 2) {
            // u = sin(theta) removes the endpoint singularity of the weight
            for (int i = 0; i < count; ++i) {
                double t = step * i;
                out.samples[static_cast<std::size_t>(i)] = quad::integrate(
                    [&](double th) { return p.eval(t * std::sin(th)); }, 0.0, pi / 2,
                    1e-9);
            }
            return out;
        }
        throw std::invalid_argument("radial_transform: reduce supports d in {1, 2, 3}");
    }

    if (d != 3)
        throw std::invalid_argument("radial_transform: invert supports d in {1, 3}");
    auto tf = [&](int i) { return step * i * p.samples[static_cast<std::size_t>(i)]; };
    out.samples[0] = p.samples[0];  // (t F0)' -> F0(0) as t -> 0
    for (int i = 1; i + 1 < count; ++i)
        out.samples[static_cast<std::size_t>(i)] = (tf(i + 1) - tf(i - 1)) / (2.0 * step);
    out.samples[static_cast<std::size_t>(count - 1)] =
        (3.0 * tf(count - 1) - 4.0 * tf(count - 2) + tf(count - 3)) / (2.0 * step);
    return out;
}

// Minimum modulus of the averaged-difference symbol on a uniform grid over
// (0, x_max]; the symbol vanishes only at the origin, and the scan
// corroborates that numerically.
struct PsiScanResult {
    double minimum = 0.0;
    double argmin = 0.0;
};

inline PsiScanResult psi_r_scan(int r, double x_max, int samples = 20000) {
    if (r < 1 || r > 8) throw std::invalid_argument("psi_r_scan: r in 1..8");
    if (!(x_max > 0.0) || x_max > 1000.0)
        throw std::invalid_argument("psi_r_scan: x_max in (0, 1000]");
    if (samples < 10) throw std::invalid_argument("psi_r_scan: need >= 10 samples");
    PsiScanResult best{std::numeric_limits<double>::infinity(), 0.0};
    for (int j = 1; j <= samples; ++j) {
        double x = x_max * j / samples;
        double v = std::abs(psi_linearized(x, static_cast<double>(r)));
        if (v < best.minimum) {
            best.minimum = v;
            best.argmin = x;
        }
    }
    return best;
}

namespace detail {

// T(x) = int_x^inf cos(c v) v^{-s} dv for x away from 0, by repeated
// integration by parts. The boundary terms alternate sin, cos with sign
// pattern -, +, +, -, and each level shrinks by (s+j)/(c x); the series is
// asymptotic, so summation stops at the smallest term.
inline double cosine_tail_integral(double c, double s, double x) {
    double acc = 0.0;
    double factor = 1.0 / c;  // accumulates s (s+1) ... / c^{j+1}
    double sgn = -1.0;
    double power = std::pow(x, -s);
    bool use_sin = true;
    for (int j = 0; j < 80; ++j) {
        acc += sgn * factor * power * (use_sin ? std::sin(c * x) : std::cos(c * x));
        double next_scale = (s + j) / (c * x);
        if (std::abs(factor * power) * next_scale < 1e-18 || next_scale >= 1.0) break;
        factor *= (s + j) / c;
        power /= x;
        if (use_sin) sgn = -sgn;
        use_sin = !use_sin;
    }
    return acc;
}

}  // namespace detail

// One-sided oscillatory tail S(x) = int_x^inf sin^{2r}(v) v^{-(alpha+1)} dv,
// evaluated through the cosine expansion of sin^{2r} with asymptotic tails.
inline double sin_power_upper_integral(double x, int r, double alpha) {
    if (r < 1 || r > 12) throw std::invalid_argument("sin_power_upper_integral: r in 1..12");
    if (!(alpha > 0.0)) throw std::invalid_argument("sin_power_upper_integral: alpha > 0");
    if (!(x > 0.0)) throw std::invalid_argument("sin_power_upper_integral: x > 0");
    const double cut = 20.0;
    const double four_r = std::pow(4.0, r);
    double acc = 0.0;
    if (x < cut) {
        acc += quad::integrate(
            [&](double v) {
                return std::pow(std::sin(v), 2 * r) * std::pow(v, -alpha - 1.0);
            },
            x, cut, 1e-12);
    }
    double far = std::max(x, cut);
    acc += quad::binomial(2 * r, r) / four_r * std::pow(far, -alpha) / alpha;
    for (int mm = 1; mm <= r; ++mm) {
        double sgn = (mm % 2 == 0) ? 1.0 : -1.0;
        acc += 2.0 / four_r * sgn * quad::binomial(2 * r, r - mm) *
               detail::cosine_tail_integral(2.0 * mm, alpha + 1.0, far);
    }
    return acc;
}

// psi(x) = int_1^inf sin^{2r}(xu) u^{-(alpha+1)} du = x^alpha S(x).
inline double sin_tail_profile(double x, int r, double alpha) {
    return std::pow(x, alpha) * sin_power_upper_integral(x, r, alpha);
}

// Oscillation-averaged limit of the profile as x -> infinity.
inline double sin_tail_limit(int r, double alpha) {
    if (r < 1) throw std::invalid_argument("sin_tail_limit: r >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("sin_tail_limit: alpha > 0");
    return quad::binomial(2 * r, r) / std::pow(4.0, r) / alpha;
}

// Near-zero constant: psi(x)/x^alpha -> int_0^inf sin^{2r}(u) u^{-(1+alpha)} du,
// finite exactly when 0 < alpha < 2r.
inline double sin_zero_constant(int r, double alpha) {
    if (r < 1 || !(alpha > 0.0) || !(alpha < 2.0 * r))
        throw std::invalid_argument("sin_zero_constant: need 0 < alpha < 2r");
    double head = quad::integrate(
        [&](double v) {
            double s = std::sin(v);
            return std::pow(s, 2 * r) * std::pow(v, -alpha - 1.0);
        },
        0.0, 1.0, 1e-12);
    return head + sin_power_upper_integral(1.0, r, alpha);
}

}  // namespace smoothlab
