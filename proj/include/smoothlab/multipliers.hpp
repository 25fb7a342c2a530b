#pragma once

// Summation methods as scalar multipliers phi(eps k).
//
// The descriptor holds one of a catalog of shapes:
//   riesz(alpha, beta)        (1 - |x|^alpha)_+^beta, radial
//   bochner_riesz(r, delta)   alias riesz(2r, delta)
//   fejer                     riesz(1, 1)
//   modulus_even(r)           (1 - |x|^r)_+, r even
//   modulus_odd(r)            (1 - |x|^{r+1})_+ + i |x|^r (1-|x|)_+ sign x, r odd
//   modulus_fractional(r)     (1 - |x|^r)_+ - i tan(r pi/2) |x|^r (1-|x|)_+ sign x
//   marcinkiewicz_2d(n)       average of square partial sums, evaluated with eps = 1
//   dirichlet_power(s, r, n)  r-th difference mean against the s-th power of the
//                             degree-n Dirichlet kernel; multiplier phi_n(k/n)
//   custom                    radial linear interpolation of a node/value table
//
// The modulus_* family is built so that || f - Phi_eps f ||_p runs two-sided
// with omega_r(f; eps)_p; the odd and fractional shapes need the imaginary
// correction term to reach the sharp order.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smoothlab/quadrature.hpp"
#include "smoothlab/spectral.hpp"

namespace smoothlab {

struct MultiplierDescriptor {
    enum class Kind {
        riesz,
        modulus_even,
        modulus_odd,
        modulus_fractional,
        fejer,
        marcinkiewicz_2d,
        dirichlet_power,
        custom,
    };

    Kind kind = Kind::fejer;
    double alpha = 1.0;  // riesz
    double beta = 1.0;   // riesz
    double order = 1.0;  // modulus_* kinds
    int kernel_power = 0;   // dirichlet_power s
    int diff_order = 0;     // dirichlet_power r
    int degree = 0;         // dirichlet_power / marcinkiewicz n
    std::vector<double> table;         // dirichlet_power: phi(k), k = 0..s*n
    std::vector<double> custom_nodes;  // custom: ascending nodes >= 0
    std::vector<complex_t> custom_values;

    static MultiplierDescriptor riesz_means(double alpha, double beta) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("riesz: need alpha > 0 and beta > 0");
        MultiplierDescriptor m;
        m.kind = Kind::riesz;
        m.alpha = alpha;
        m.beta = beta;
        return m;
    }

    static MultiplierDescriptor bochner_riesz(int r, double delta) {
        if (r < 1 || !(delta > 0.0))
            throw std::invalid_argument("bochner_riesz: need r >= 1, delta > 0");
        return riesz_means(2.0 * r, delta);
    }

    static MultiplierDescriptor fejer() {
        MultiplierDescriptor m;
        m.kind = Kind::fejer;
        return m;
    }

    static MultiplierDescriptor modulus_even(int r) {
        if (r < 2 || r % 2 != 0)
            throw std::invalid_argument("modulus_even: order must be a positive even integer");
        MultiplierDescriptor m;
        m.kind = Kind::modulus_even;
        m.order = r;
        return m;
    }

    static MultiplierDescriptor modulus_odd(int r) {
        if (r < 1 || r % 2 != 1)
            throw std::invalid_argument("modulus_odd: order must be a positive odd integer");
        MultiplierDescriptor m;
        m.kind = Kind::modulus_odd;
        m.order = r;
        return m;
    }

    static MultiplierDescriptor modulus_fractional(double r) {
        if (!(r > 0.0)) throw std::invalid_argument("modulus_fractional: order must be positive");
        double nearest_odd = 2.0 * std::round((r - 1.0) / 2.0) + 1.0;
        if (std::abs(r - nearest_odd) < 1e-9)
            throw std::invalid_argument(
                "modulus_fractional: odd integer order has no finite tangent factor");
        MultiplierDescriptor m;
        m.kind = Kind::modulus_fractional;
        m.order = r;
        return m;
    }

    static MultiplierDescriptor marcinkiewicz_2d(int n) {
        if (n < 0) throw std::invalid_argument("marcinkiewicz_2d: degree must be >= 0");
        MultiplierDescriptor m;
        m.kind = Kind::marcinkiewicz_2d;
        m.degree = n;
        return m;
    }

    static MultiplierDescriptor dirichlet_power(int s, int r, int n);

    static MultiplierDescriptor custom(std::vector<double> nodes,
                                       std::vector<complex_t> values) {
        if (nodes.size() != values.size() || nodes.size() < 2)
            throw std::invalid_argument("custom: need matching node/value tables, size >= 2");
        if (nodes.front() != 0.0 || !std::is_sorted(nodes.begin(), nodes.end()))
            throw std::invalid_argument("custom: nodes must ascend from 0");
        MultiplierDescriptor m;
        m.kind = Kind::custom;
        m.custom_nodes = std::move(nodes);
        m.custom_values = std::move(values);
        return m;
    }
};

// Table phi(k), k = 0..s*n, of the difference mean against D_n^s. A(m) below
// is the s-fold self-convolution of the indicator of [-n, n]; the normalized
// transform of the kernel is A(m)/A(0) and the full multiplier applies the
// r-th difference weights across dilates.
inline std::vector<double> dirichlet_power_multiplier(int s, int r, int n) {
    if (s < 1 || r < 1 || n < 1)
        throw std::invalid_argument("dirichlet_power_multiplier: s, r, n must be >= 1");
    if (s > 10 || n > 1024)
        throw std::invalid_argument("dirichlet_power_multiplier: table would be huge");
    // iterative convolution; values fit double exactly only for small s*n,
    // but only the ratio to A(0) is consumed downstream
    std::vector<double> a{1.0};  // delta at 0, then convolve s times
    int offset = 0;              // a[i] holds A(i - offset)
    for (int step = 0; step < s; ++step) {
        std::vector<double> next(a.size() + 2 * static_cast<std::size_t>(n), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (int j = -n; j <= n; ++j) next[i + static_cast<std::size_t>(j + n)] += a[i];
        a = std::move(next);
        offset += n;
    }
    auto A = [&](long long m) -> double {
        long long idx = m + offset;
        if (idx < 0 || idx >= static_cast<long long>(a.size())) return 0.0;
        return a[static_cast<std::size_t>(idx)];
    };
    const double a0 = A(0);
    std::vector<double> phi(static_cast<std::size_t>(s) * n + 1, 0.0);
    for (long long k = 0; k <= static_cast<long long>(s) * n; ++k) {
        double acc = 0.0;
        for (int v = 1; v <= r; ++v) {
            double sgn = (v % 2 == 1) ? 1.0 : -1.0;
            acc += sgn * quad::binomial(r, v) * A(v * k) / a0;
        }
        phi[static_cast<std::size_t>(k)] = acc;
    }
    return phi;
}

inline MultiplierDescriptor MultiplierDescriptor::dirichlet_power(int s, int r, int n) {
    if (s < r + 2)
        throw std::invalid_argument("dirichlet_power: requires s >= r + 2");
    MultiplierDescriptor m;
    m.kind = Kind::dirichlet_power;
    m.kernel_power = s;
    m.diff_order = r;
    m.degree = n;
    m.table = dirichlet_power_multiplier(s, r, n);
    return m;
}

namespace detail {

// Whittaker interpolation of a symmetric integer table: the unique band
// limited extension of the multiplier samples,
//   Psi(t) = sin(pi t)/pi * sum_m (-1)^m g(|m|) / (t - m).
inline double whittaker_eval(const std::vector<double>& g, double t) {
    const long long top = static_cast<long long>(g.size()) - 1;
    double tr = std::round(t);
    if (std::abs(t - tr) < 1e-9) {
        long long m = std::llabs(static_cast<long long>(tr));
        return m <= top ? g[static_cast<std::size_t>(m)] : 0.0;
    }
    double acc = 0.0;
    for (long long m = -top; m <= top; ++m) {
        double gm = g[static_cast<std::size_t>(std::llabs(m))];
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        acc += sgn * gm / (t - static_cast<double>(m));
    }
    return std::sin(std::numbers::pi_v<double> * t) / std::numbers::pi_v<double> * acc;
}

}  // namespace detail

// Pointwise multiplier value at a real argument (x = eps k in applications).
inline complex_t evaluate(const MultiplierDescriptor& m, std::span<const double> x) {
    double rad2 = 0.0;
    for (double xi : x) rad2 += xi * xi;
    const double rad = std::sqrt(rad2);
    auto clip = [](double v) { return v > 0.0 ? v : 0.0; };
    switch (m.kind) {
        case MultiplierDescriptor::Kind::riesz:
            return std::pow(clip(1.0 - std::pow(rad, m.alpha)), m.beta);
        case MultiplierDescriptor::Kind::fejer:
            return clip(1.0 - rad);
        case MultiplierDescriptor::Kind::modulus_even:
            return clip(1.0 - std::pow(rad, m.order));
        case MultiplierDescriptor::Kind::modulus_odd: {
            if (x.size() != 1)
                throw std::invalid_argument("modulus_odd: one-dimensional multiplier");
            double sign = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
            double re = clip(1.0 - std::pow(rad, m.order + 1.0));
            double im = std::pow(rad, m.order) * clip(1.0 - rad) * sign;
            return {re, im};
        }
        case MultiplierDescriptor::Kind::modulus_fractional: {
            if (x.size() != 1)
                throw std::invalid_argument("modulus_fractional: one-dimensional multiplier");
            double sign = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
            double re = clip(1.0 - std::pow(rad, m.order));
            double im = -std::tan(m.order * std::numbers::pi_v<double> / 2.0) *
                        std::pow(rad, m.order) * clip(1.0 - rad) * sign;
            return {re, im};
        }
        case MultiplierDescriptor::Kind::marcinkiewicz_2d: {
            if (x.size() != 2)
                throw std::invalid_argument("marcinkiewicz_2d: two-dimensional multiplier");
            // mean over nu = 0..n of the square partial-sum indicators
            double mx = std::max(std::abs(x[0]), std::abs(x[1]));
            double count = clip(static_cast<double>(m.degree) + 1.0 - std::ceil(mx));
            return count / (static_cast<double>(m.degree) + 1.0);
        }
        case MultiplierDescriptor::Kind::dirichlet_power: {
            if (x.size() != 1)
                throw std::invalid_argument("dirichlet_power: one-dimensional multiplier");
            // x in units of k/n; the table (which already folds the
            // difference weights in) is indexed by k and extended band
            // limitedly to real arguments
            double t = std::abs(x[0]) * static_cast<double>(m.degree);
            return detail::whittaker_eval(m.table, t);
        }
        case MultiplierDescriptor::Kind::custom: {
            if (rad >= m.custom_nodes.back()) return m.custom_values.back() * 0.0;
            auto it = std::upper_bound(m.custom_nodes.begin(), m.custom_nodes.end(), rad);
            std::size_t hi = static_cast<std::size_t>(it - m.custom_nodes.begin());
            if (hi == 0) return m.custom_values.front();
            double x0 = m.custom_nodes[hi - 1], x1 = m.custom_nodes[hi];
            double w = (rad - x0) / (x1 - x0);
            return m.custom_values[hi - 1] * (1.0 - w) + m.custom_values[hi] * w;
        }
    }
    return 0.0;
}

inline int multiplier_dimension(const MultiplierDescriptor& m) {
    switch (m.kind) {
        case MultiplierDescriptor::Kind::modulus_odd:
        case MultiplierDescriptor::Kind::modulus_fractional:
        case MultiplierDescriptor::Kind::dirichlet_power:
            return 1;
        case MultiplierDescriptor::Kind::marcinkiewicz_2d:
            return 2;
        default:
            return 0;  // any dimension
    }
}

// Coefficients c_k -> phi(eps k) c_k.
inline Spectrum apply_multiplier(const Spectrum& s, const MultiplierDescriptor& m,
                                 double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("apply_multiplier: eps must be positive");
    int want = multiplier_dimension(m);
    if (want != 0 && want != s.dim())
        throw std::invalid_argument("apply_multiplier: dimension mismatch");
    return apply_symbol(s, [&](std::span<const int> k) {
        double x[3];
        for (std::size_t i = 0; i < k.size(); ++i) x[i] = eps * k[i];
        return evaluate(m, std::span<const double>(x, k.size()));
    });
}

struct ApproximationResult {
    Spectrum approximant;
    double error = 0.0;  // || f - Phi_eps f ||_p
};

inline ApproximationResult approximate(const Spectrum& f, const MultiplierDescriptor& m,
                                       double eps, const LebesgueExponent& p) {
    ApproximationResult out{apply_multiplier(f, m, eps), 0.0};
    std::vector<complex_t> diff(f.coeffs());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= out.approximant.coeffs()[i];
    Spectrum ds(f.dim(), f.extent(), std::move(diff));
    out.error = p.is_infinity() || p.value() != 2.0 ? lp_norm(synthesize(ds), p)
                                                    : l2_norm(ds);
    return out;
}

// Positive solutions of phi(x) = 1 on (lo, hi) for one-dimensional
// multipliers: uniform scan for sign changes of Re phi - 1, then bisection.
// Tangential touches without a sign change are not reported.
inline std::vector<double> find_unit_roots(const MultiplierDescriptor& m, double lo,
                                           double hi, int scan_points = 10000,
                                           double tol = 1e-10) {
    if (!(lo >= 0.0) || !(hi > lo))
        throw std::invalid_argument("find_unit_roots: bad interval");
    auto g = [&](double x) {
        double arg[1] = {x};
        return evaluate(m, std::span<const double>(arg, 1)).real() - 1.0;
    };
    std::vector<double> roots;
    double prev_x = lo > 0.0 ? lo : (hi - lo) / scan_points * 1e-6;
    double prev_g = g(prev_x);
    for (int i = 1; i <= scan_points; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / scan_points;
        double gx = g(x);
        if ((prev_g < 0.0 && gx >= 0.0) || (prev_g > 0.0 && gx <= 0.0)) {
            double a = prev_x, b = x, ga = prev_g;
            while (b - a > tol) {
                double mid = 0.5 * (a + b);
                double gm = g(mid);
                if ((ga < 0.0) == (gm < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            double root = 0.5 * (a + b);
            // multipliers satisfy phi(0) = 1 exactly; a crossing inside the
            // first scan cell of a zero-based interval is that trivial root
            // resurfacing through round-off, not an interior unit point
            bool trivial = lo == 0.0 && root < (hi - lo) / scan_points;
            if (!trivial) roots.push_back(root);
        }
        prev_x = x;
        prev_g = gx;
    }
    return roots;
}

}  // namespace smoothlab
