#pragma once

// Moduli of smoothness on the periodic grid.
//
// Three families are provided, all acting on the band-limited representative:
//   * classical_modulus: sup over a scaled step set of the Lp norm of an
//     r-th order difference, the sup realized by deterministic sampling with
//     doubling refinement;
//   * linearized_modulus: the step average replaces the sup, turning the
//     whole modulus into a single Fourier multiplier (psi_r);
//   * weighted_modulus: even-order symmetric differences integrated against
//     a measure in the step variable (ball average, per-axis average, or a
//     truncated |u|^{-q} kernel), again a single multiplier.

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smoothlab/quadrature.hpp"
#include "smoothlab/spectral.hpp"
#include "smoothlab/symbols.hpp"

namespace smoothlab {

// || multiplier applied to f ||_p with a fast Parseval path for p = 2.
template <class Symbol>
double symbol_norm(const Spectrum& s, Symbol&& sym, const LebesgueExponent& p) {
    if (!p.is_infinity() && p.value() == 2.0) {
        double acc = 0.0;
        detail::for_each_mode(s.dim(), s.extent(),
                              [&](std::size_t lin, std::span<const int> k) {
                                  acc += std::norm(complex_t(sym(k)) * s.coeffs()[lin]);
                              });
        return std::sqrt(acc);
    }
    return lp_norm(synthesize(apply_symbol(s, sym)), p);
}

struct DifferenceSpec {
    enum class Kind { forward, symmetric };
    Kind kind = Kind::forward;
    double order = 1.0;        // positive; symmetric requires an even integer
    std::vector<double> step;  // delta, arity = dimension
};

// Apply the difference operator as a multiplier. Forward differences use
// (1 - e^{i(k,delta)})^r with the principal branch for fractional r;
// symmetric ones use (2i sin((k,delta)))^{2s}.
inline Spectrum difference(const Spectrum& s, const DifferenceSpec& spec) {
    if (static_cast<int>(spec.step.size()) != s.dim())
        throw std::invalid_argument("difference: step arity must match dimension");
    auto dot = [&](std::span<const int> k) {
        double t = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) t += spec.step[i] * k[i];
        return t;
    };
    if (spec.kind == DifferenceSpec::Kind::forward) {
        const double r = spec.order;
        return apply_symbol(
            s, [&](std::span<const int> k) { return forward_difference_symbol(dot(k), r); });
    }
    if (spec.order != std::floor(spec.order))
        throw std::invalid_argument("difference: symmetric order must be integer");
    const int order = static_cast<int>(spec.order);
    return apply_symbol(s, [&](std::span<const int> k) {
        return symmetric_difference_symbol(dot(k), order);
    });
}

// Step sets for the sup in the classical modulus. All sets live inside the
// closed unit ball and are star-shaped about the origin; the modulus call
// scales them by h.
struct StepSet {
    enum class Kind { segment, ball, axes, square, points };
    Kind kind = Kind::segment;
    std::vector<double> direction;                // segment only
    std::vector<std::vector<double>> point_list;  // points only

    static StepSet segment(std::vector<double> dir) {
        double n2 = 0.0;
        for (double v : dir) n2 += v * v;
        if (n2 <= 0.0) throw std::invalid_argument("StepSet: zero direction");
        for (double& v : dir) v /= std::sqrt(n2);
        return {Kind::segment, std::move(dir), {}};
    }
    static StepSet ball() { return {Kind::ball, {}, {}}; }
    static StepSet axes() { return {Kind::axes, {}, {}}; }
    static StepSet square() { return {Kind::square, {}, {}}; }
    static StepSet points(std::vector<std::vector<double>> pts) {
        for (const auto& pt : pts) {
            double n2 = 0.0;
            for (double v : pt) n2 += v * v;
            if (n2 > 1.0 + 1e-12)
                throw std::invalid_argument("StepSet: point outside the unit ball");
        }
        return {Kind::points, {}, std::move(pts)};
    }
};

struct ModulusOptions {
    int initial_samples = 128;   // sample budget for the sup
    int max_samples = 2048;      // refinement cap
    double stability_rel = 5e-3; // stop doubling once the sup moves less than this
    double step_floor = 1.0 / 1024.0;  // smallest sampled fraction of h
};

namespace detail {

// Deterministic unit-step samples for a step set. Radial coordinates are
// log-spaced down to the floor (the sup is almost always attained near the
// outer radius, but short steps are kept in the net); boundary spokes are
// always included so exact extremes like |delta| = h are hit.
inline std::vector<std::vector<double>> unit_steps(const StepSet& set, int dim, int m,
                                                   double floor) {
    std::vector<std::vector<double>> out;
    auto radial = [&](int count, auto&& emit) {
        for (int i = 0; i < count; ++i) {
            double t = std::pow(floor, 1.0 - static_cast<double>(i) / (count - 1));
            emit(t);
        }
    };
    switch (set.kind) {
        case StepSet::Kind::segment: {
            if (static_cast<int>(set.direction.size()) != dim)
                throw std::invalid_argument("StepSet: direction arity mismatch");
            radial(m, [&](double t) {
                std::vector<double> step(set.direction);
                for (double& v : step) v *= t;
                out.push_back(std::move(step));
            });
            break;
        }
        case StepSet::Kind::axes: {
            int per_axis = std::max(2, m / dim);
            for (int axis = 0; axis < dim; ++axis)
                radial(per_axis, [&](double t) {
                    std::vector<double> step(dim, 0.0);
                    step[axis] = t;
                    out.push_back(std::move(step));
                });
            break;
        }
        case StepSet::Kind::ball: {
            if (dim == 1) {
                radial(m, [&](double t) { out.push_back({t}); });
                break;
            }
            // Opposite steps give equal difference norms, so half the
            // directions suffice.
            for (int i = 0; i < m; ++i) {
                double u = quad::halton(i + 1, 2);
                double t = std::pow(floor, 1.0 - quad::halton(i + 1, 3));
                if (dim == 2) {
                    double th = pi * u;
                    out.push_back({t * std::cos(th), t * std::sin(th)});
                } else {
                    double z = quad::halton(i + 1, 5);
                    double th = two_pi * u;
                    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                    out.push_back({t * rho * std::cos(th), t * rho * std::sin(th), t * z});
                }
            }
            // Boundary spokes at |u| = 1.
            for (int axis = 0; axis < dim; ++axis) {
                std::vector<double> e(dim, 0.0);
                e[axis] = 1.0;
                out.push_back(e);
            }
            if (dim == 2) {
                double c = std::sqrt(0.5);
                out.push_back({c, c});
                out.push_back({c, -c});
            }
            break;
        }
        case StepSet::Kind::square: {
            if (dim != 2) throw std::invalid_argument("StepSet: square requires d = 2");
            const double scale = std::sqrt(0.5);  // inscribed in the unit ball
            for (int i = 0; i < m; ++i) {
                double a = 2.0 * quad::halton(i + 1, 2) - 1.0;
                double b = 2.0 * quad::halton(i + 1, 3) - 1.0;
                out.push_back({scale * a, scale * b});
            }
            out.push_back({scale, scale});
            out.push_back({scale, -scale});
            out.push_back({scale, 0.0});
            out.push_back({0.0, scale});
            break;
        }
        case StepSet::Kind::points: {
            for (const auto& p : set.point_list) {
                if (static_cast<int>(p.size()) != dim)
                    throw std::invalid_argument("StepSet: point arity mismatch");
                out.push_back(p);
            }
            break;
        }
    }
    return out;
}

}  // namespace detail

// omega_r(f; E; h)_p: sup over steps delta in h*E of ||difference(f)||_p.
// The sup is a max over a deterministic sample net, refined by doubling until
// it moves by less than options.stability_rel (explicit point lists are
// evaluated exactly, no refinement).
inline double classical_modulus(const Spectrum& f, double order, const StepSet& set,
                                double h, const LebesgueExponent& p,
                                const ModulusOptions& options = {}) {
    if (!(h > 0.0)) throw std::invalid_argument("classical_modulus: h must be positive");
    auto sup_over = [&](int m) {
        double best = 0.0;
        for (const auto& unit : detail::unit_steps(set, f.dim(), m, options.step_floor)) {
            DifferenceSpec d;
            d.kind = DifferenceSpec::Kind::forward;
            d.order = order;
            d.step.assign(unit.begin(), unit.end());
            for (double& v : d.step) v *= h;
            auto dot = [&](std::span<const int> k) {
                double t = 0.0;
                for (std::size_t i = 0; i < k.size(); ++i) t += d.step[i] * k[i];
                return t;
            };
            best = std::max(best, symbol_norm(f, [&](std::span<const int> k) {
                return forward_difference_symbol(dot(k), order);
            }, p));
        }
        return best;
    };
    if (set.kind == StepSet::Kind::points) return sup_over(0);
    int m = options.initial_samples;
    double value = sup_over(m);
    while (2 * m <= options.max_samples) {
        m *= 2;
        double refined = std::max(value, sup_over(m));
        bool stable = refined - value <= options.stability_rel * std::max(refined, 1e-300);
        value = refined;
        if (stable) break;
    }
    return value;
}

// Averaged modulus: the multiplier psi_r((k, h e_axis)), maximized over axes
// for d > 1. One multiplier application instead of a sup.
inline double linearized_modulus(const Spectrum& f, double order, double h,
                                 const LebesgueExponent& p) {
    if (!(h > 0.0)) throw std::invalid_argument("linearized_modulus: h must be positive");
    double best = 0.0;
    for (int axis = 0; axis < f.dim(); ++axis) {
        best = std::max(best, symbol_norm(f, [&](std::span<const int> k) {
            return psi_linearized(h * k[axis], order);
        }, p));
    }
    return best;
}

// Measures in the step variable for weighted moduli of even order 2r.
struct WeightSpec {
    enum class Kind { ball_indicator, axes_sum, kernel_radial, kernel_directional };
    Kind kind = Kind::ball_indicator;
    double exponent_q = 0.0;   // kernel kinds: weight |u|^{-q}
    double truncation_U = 64.0;
    std::vector<std::vector<double>> directions;  // kernel_directional only

    static WeightSpec ball() { return {Kind::ball_indicator, 0.0, 0.0, {}}; }
    static WeightSpec axes() { return {Kind::axes_sum, 0.0, 0.0, {}}; }
    static WeightSpec kernel(double q, double U) {
        return {Kind::kernel_radial, q, U, {}};
    }
    static WeightSpec kernel_along(double q, double U,
                                   std::vector<std::vector<double>> dirs) {
        return {Kind::kernel_directional, q, U, std::move(dirs)};
    }
};

struct WeightedModulusResult {
    double value = 0.0;
    double tail_bound = 0.0;  // analytic bound on the dropped |u| > U mass
};

// Weighted modulus of order 2r. The measure integral collapses to a scalar
// multiplier in k:
//   ball:   int_{|u|<=1} (2i sin((hk,u)))^{2r} du
//   axes:   sum_j int_{-1}^{1} (2i sin(h k_j u))^{2r} du
//   kernel: int over { 1 <= |u| <= U } of (2i sin((hk,u)))^{2r} |u|^{-q} du
//           (one-sided ray in d = 1, full annulus otherwise)
//   directional kernel: like kernel but u = t e along each listed direction.
// The truncation at U drops measure mass bounded by 4^r ||f||_p * tail(U),
// reported alongside the value.
inline WeightedModulusResult weighted_modulus(const Spectrum& f, int r,
                                              const WeightSpec& w, double h,
                                              const LebesgueExponent& p) {
    if (r < 1) throw std::invalid_argument("weighted_modulus: order parameter r must be >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("weighted_modulus: h must be positive");
    const int d = f.dim();
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;  // (2i sin)^2r = (-4)^r sin^{2r}
    const double four_r = std::ldexp(1.0, 2 * r);   // 4^r
    const bool kernel_kind = w.kind == WeightSpec::Kind::kernel_radial ||
                             w.kind == WeightSpec::Kind::kernel_directional;
    if (kernel_kind) {
        double min_q = w.kind == WeightSpec::Kind::kernel_radial ? d : 1;
        if (!(w.exponent_q > min_q))
            throw std::invalid_argument("weighted_modulus: kernel exponent too small");
        if (!(w.truncation_U > 1.0))
            throw std::invalid_argument("weighted_modulus: truncation must exceed 1");
    }
    if (w.kind == WeightSpec::Kind::kernel_directional && w.directions.empty())
        throw std::invalid_argument("weighted_modulus: no directions given");

    const double q = w.exponent_q, U = w.truncation_U;

    // 1-d profiles, memoized on the scalar that determines them.
    std::map<double, double> cache;
    auto memo = [&](double key, auto&& compute) {
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double v = compute(key);
        cache.emplace(key, v);
        return v;
    };

    auto ray_kernel = [&](double a) {  // int_1^U sin^{2r}(a u) u^{-q} du
        return quad::integrate_oscillatory(
            [&](double u) { return std::pow(std::sin(a * u), 2 * r) * std::pow(u, -q); },
            1.0, U, 2.0 * r * std::abs(a));
    };

    auto multiplier = [&](std::span<const int> k) -> double {
        switch (w.kind) {
            case WeightSpec::Kind::ball_indicator: {
                double kk = 0.0;
                for (int i = 0; i < d; ++i) kk += static_cast<double>(k[i]) * k[i];
                double a = h * std::sqrt(kk);
                return sign * four_r * memo(a, [&](double aa) {
                    if (d == 1) return 2.0 * quad::mean_sin_power_segment(r, aa);
                    if (d == 2)
                        return quad::integrate_oscillatory(
                            [&](double rho) {
                                return rho * quad::angular_sin_power(r, aa * rho);
                            },
                            0.0, 1.0, 2.0 * r * std::abs(aa));
                    return quad::integrate_oscillatory(
                        [&](double rho) {
                            return two_pi * rho * rho *
                                   quad::diameter_sin_power(r, aa * rho);
                        },
                        0.0, 1.0, 2.0 * r * std::abs(aa));
                });
            }
            case WeightSpec::Kind::axes_sum: {
                double acc = 0.0;
                for (int i = 0; i < d; ++i) {
                    double a = h * k[i];
                    acc += memo(std::abs(a), [&](double aa) {
                        return 2.0 * quad::mean_sin_power_segment(r, aa);
                    });
                }
                return sign * four_r * acc;
            }
            case WeightSpec::Kind::kernel_radial: {
                double kk = 0.0;
                for (int i = 0; i < d; ++i) kk += static_cast<double>(k[i]) * k[i];
                double a = h * std::sqrt(kk);
                return sign * four_r * memo(a, [&](double aa) {
                    if (d == 1) return ray_kernel(aa);
                    if (d == 2)
                        return quad::integrate_oscillatory(
                            [&](double rho) {
                                return std::pow(rho, 1.0 - q) *
                                       quad::angular_sin_power(r, aa * rho);
                            },
                            1.0, U, 2.0 * r * std::abs(aa));
                    return quad::integrate_oscillatory(
                        [&](double rho) {
                            return two_pi * std::pow(rho, 2.0 - q) *
                                   quad::diameter_sin_power(r, aa * rho);
                        },
                        1.0, U, 2.0 * r * std::abs(aa));
                });
            }
            case WeightSpec::Kind::kernel_directional: {
                double acc = 0.0;
                for (const auto& e : w.directions) {
                    if (static_cast<int>(e.size()) != d)
                        throw std::invalid_argument(
                            "weighted_modulus: direction arity mismatch");
                    double dot = 0.0;
                    for (int i = 0; i < d; ++i) dot += e[i] * k[i];
                    acc += memo(std::abs(h * dot),
                                [&](double aa) { return ray_kernel(aa); });
                }
                return sign * four_r * acc;
            }
        }
        return 0.0;
    };

    WeightedModulusResult result;
    result.value = symbol_norm(f, multiplier, p);
    if (kernel_kind) {
        double tail_measure = 0.0;
        if (w.kind == WeightSpec::Kind::kernel_directional) {
            tail_measure = static_cast<double>(w.directions.size()) *
                           std::pow(U, 1.0 - q) / (q - 1.0);
        } else if (d == 1) {
            tail_measure = std::pow(U, 1.0 - q) / (q - 1.0);
        } else if (d == 2) {
            tail_measure = two_pi * std::pow(U, 2.0 - q) / (q - 2.0);
        } else {
            tail_measure = 2.0 * two_pi * std::pow(U, 3.0 - q) / (q - 3.0);
        }
        double fnorm = p.is_infinity() || p.value() != 2.0
                           ? lp_norm(synthesize(f), p)
                           : l2_norm(f);
        result.tail_bound = four_r * fnorm * tail_measure;
    }
    return result;
}

// Product of anchored averaged differences (one spatial dimension): the
// multiplier
//   psi_{r0}(hk) * prod_j [ psi_1(hk) - lambda(x_j) psi_2(hk) ]^{m_j}
// with anchors x_j away from zero and integer multiplicities m_j.
struct CompositeAnchor {
    double point = 1.0;
    int multiplicity = 1;
};

inline Spectrum composite_difference(const Spectrum& f, double h, int base_order,
                                     const std::vector<CompositeAnchor>& anchors) {
    if (f.dim() != 1)
        throw std::invalid_argument("composite_difference: one-dimensional only");
    if (base_order < 0) throw std::invalid_argument("composite_difference: bad base order");
    std::vector<complex_t> lam(anchors.size());
    for (std::size_t j = 0; j < anchors.size(); ++j) {
        if (anchors[j].multiplicity < 1)
            throw std::invalid_argument("composite_difference: bad multiplicity");
        lam[j] = lambda_anchor(anchors[j].point);
    }
    return apply_symbol(f, [&](std::span<const int> k) {
        double t = h * k[0];
        complex_t acc = base_order > 0 ? psi_linearized(t, base_order) : complex_t(1.0);
        if (!anchors.empty()) {
            complex_t p1 = psi_linearized(t, 1.0);
            complex_t p2 = psi_linearized(t, 2.0);
            for (std::size_t j = 0; j < anchors.size(); ++j) {
                complex_t factor = p1 - lam[j] * p2;
                for (int i = 0; i < anchors[j].multiplicity; ++i) acc *= factor;
            }
        }
        return acc;
    });
}

// Weights (-1)^v C(r,v) of the (possibly fractional) forward difference, cut
// where |C(r,v)| drops below tol. The reported sum of |C(r,v)| is exact: the
// tail beyond any M >= ceil(r) has one sign and telescopes to |C(r-1, M)|.
struct BinomialWeights {
    std::vector<double> weights;
    double abs_sum = 0.0;
};

inline BinomialWeights fractional_binomial_weights(double r, double tol = 1e-12,
                                                   std::size_t max_terms = 1u << 20) {
    if (!(r > 0.0)) throw std::invalid_argument("order must be positive");
    BinomialWeights out;
    double c = 1.0;  // C(r, v)
    for (std::size_t v = 0; v < max_terms; ++v) {
        out.weights.push_back((v % 2 == 0 ? 1.0 : -1.0) * c);
        double next = c * (r - static_cast<double>(v)) / (static_cast<double>(v) + 1.0);
        if (std::abs(next) < tol) break;
        c = next;
    }
    // Exact absolute sum: partial sums of C(r,v) signs settle past ceil(r),
    // and sum_{v<=M} (-1)^v C(r,v) = (-1)^M C(r-1, M).
    std::size_t M = static_cast<std::size_t>(std::ceil(r)) + 64;
    double abs_acc = 0.0, cc = 1.0, tail = 1.0;
    for (std::size_t v = 0; v <= M; ++v) {
        abs_acc += std::abs(cc);
        cc *= (r - static_cast<double>(v)) / (static_cast<double>(v) + 1.0);
    }
    for (std::size_t v = 0; v < M; ++v)
        tail *= (r - 1.0 - static_cast<double>(v)) / (static_cast<double>(v) + 1.0);
    out.abs_sum = abs_acc + std::abs(tail);
    return out;
}

}  // namespace smoothlab
