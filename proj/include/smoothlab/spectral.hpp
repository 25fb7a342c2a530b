#pragma once

// Core spectral types: periodic grid functions on [-pi,pi)^d, their Fourier
// coefficient arrays, and the handful of exact operations everything else is
// built from (transforms, Lp norms, translation, Fourier multipliers).
//
// Conventions:
//   * grid nodes      x_j = 2*pi*j/n - pi,  j = 0..n-1 per axis
//   * coefficients    c_k = (2*pi)^{-d} \int f(x) e^{-i(k,x)} dx,
//                     held for k_i in {-n/2, ..., n/2 - 1}
//   * the function represented is literally sum_k c_k e^{i(k,x)}; every
//     operation is exact on that band-limited representative, so operator
//     identities can be tested to round-off rather than discretization error
//   * Lp norms use the normalized measure dx/(2*pi)^d, so ||1||_p = 1 and
//     p = infinity means the grid maximum

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smoothlab/fft.hpp"

namespace smoothlab {

using complex_t = std::complex<double>;

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi_v<double>;

namespace detail {

inline bool is_valid_extent(int n) { return n >= 8 && (n & (n - 1)) == 0; }

inline void check_shape(int dim, int n) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("dimension must be 1, 2 or 3");
    if (!is_valid_extent(n))
        throw std::invalid_argument("grid extent must be a power of two >= 8");
}

inline std::size_t total_size(int dim, int n) {
    std::size_t s = 1;
    for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(n);
    return s;
}

// Walk all modes in storage order (last axis fastest), handing the callback
// the linear index and the signed frequency vector.
template <class F>
void for_each_mode(int dim, int n, F&& fn) {
    std::array<int, 3> m{0, 0, 0};
    std::array<int, 3> k{0, 0, 0};
    const std::size_t total = total_size(dim, n);
    auto signed_freq = [n](int mi) { return mi < n / 2 ? mi : mi - n; };
    for (int i = 0; i < dim; ++i) k[i] = signed_freq(0);
    for (std::size_t lin = 0; lin < total; ++lin) {
        fn(lin, std::span<const int>(k.data(), static_cast<std::size_t>(dim)));
        for (int axis = dim - 1; axis >= 0; --axis) {
            if (++m[axis] < n) {
                k[axis] = signed_freq(m[axis]);
                break;
            }
            m[axis] = 0;
            k[axis] = signed_freq(0);
        }
    }
}

}  // namespace detail

// Lebesgue exponent p in [1, infinity]. Infinity is a first-class value so
// callers never special-case it outside of norm evaluation itself.
class LebesgueExponent {
public:
    explicit LebesgueExponent(double p) : p_(p) {
        if (std::isnan(p) || p < 1.0)
            throw std::invalid_argument("Lebesgue exponent must satisfy p >= 1");
    }

    static LebesgueExponent infinity() {
        return LebesgueExponent(std::numeric_limits<double>::infinity());
    }

    bool is_infinity() const { return std::isinf(p_); }
    double value() const { return p_; }

    friend bool operator==(const LebesgueExponent& a, const LebesgueExponent& b) {
        return a.p_ == b.p_;
    }

private:
    double p_;
};

// Complex samples on the uniform shifted grid. Immutable after construction;
// all operations produce new objects.
class GridFunction {
public:
    GridFunction(int dim, int extent, std::vector<complex_t> values)
        : dim_(dim), extent_(extent), values_(std::move(values)) {
        detail::check_shape(dim_, extent_);
        if (values_.size() != detail::total_size(dim_, extent_))
            throw std::invalid_argument("GridFunction: sample count must equal extent^dim");
    }

    static GridFunction zero(int dim, int extent) {
        detail::check_shape(dim, extent);
        return GridFunction(dim, extent,
                            std::vector<complex_t>(detail::total_size(dim, extent)));
    }

    int dim() const { return dim_; }
    int extent() const { return extent_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<complex_t>& values() const { return values_; }

    // Coordinate of grid index j along any axis.
    double node(int j) const { return two_pi * j / extent_ - pi; }

private:
    int dim_;
    int extent_;
    std::vector<complex_t> values_;
};

// Fourier coefficients of a GridFunction, strictly the same storage layout as
// the sample array (axis index m encodes frequency m, or m - extent once
// m >= extent/2). The Nyquist row k = -n/2 is present once; inputs that fill
// it behave like the representative with that single signed frequency.
class Spectrum {
public:
    Spectrum(int dim, int extent, std::vector<complex_t> coeffs)
        : dim_(dim), extent_(extent), coeffs_(std::move(coeffs)) {
        detail::check_shape(dim_, extent_);
        if (coeffs_.size() != detail::total_size(dim_, extent_))
            throw std::invalid_argument("Spectrum: coefficient count must equal extent^dim");
    }

    static Spectrum zero(int dim, int extent) {
        detail::check_shape(dim, extent);
        return Spectrum(dim, extent,
                        std::vector<complex_t>(detail::total_size(dim, extent)));
    }

    int dim() const { return dim_; }
    int extent() const { return extent_; }
    std::size_t size() const { return coeffs_.size(); }
    const std::vector<complex_t>& coeffs() const { return coeffs_; }

    int max_frequency() const { return extent_ / 2; }

    // Linear index of a signed frequency vector; k_i = +n/2 aliases -n/2.
    std::size_t index_of(std::span<const int> k) const {
        if (static_cast<int>(k.size()) != dim_)
            throw std::invalid_argument("Spectrum::index_of: wrong arity");
        std::size_t lin = 0;
        for (int i = 0; i < dim_; ++i) {
            int ki = k[i];
            if (ki == extent_ / 2) ki = -extent_ / 2;
            if (ki < -extent_ / 2 || ki >= extent_ / 2)
                throw std::out_of_range("Spectrum::index_of: frequency out of band");
            int m = ki >= 0 ? ki : ki + extent_;
            lin = lin * static_cast<std::size_t>(extent_) + static_cast<std::size_t>(m);
        }
        return lin;
    }

    complex_t coeff(std::span<const int> k) const { return coeffs_[index_of(k)]; }

    complex_t coeff(std::initializer_list<int> k) const {
        return coeff(std::span<const int>(k.begin(), k.size()));
    }

    // Mutable access for builders (corpus synthesis etc.).
    std::vector<complex_t>& mutable_coeffs() { return coeffs_; }

private:
    int dim_;
    int extent_;
    std::vector<complex_t> coeffs_;
};

// Forward transform: samples -> coefficients. Exact (up to round-off) for any
// band-limited input with frequencies inside the storage cube.
inline Spectrum analyze(const GridFunction& f) {
    const int d = f.dim(), n = f.extent();
    std::vector<complex_t> out(f.size());
    std::array<int, 3> extents{n, n, n};
    detail::FftEngine::instance().transform(d, extents, f.values().data(), out.data(),
                                            FFTW_FORWARD);
    // Grid offset -pi contributes e^{i pi k} = (-1)^k per axis; since the
    // extent is even this equals (-1)^m for the storage index m.
    const double scale = 1.0 / static_cast<double>(f.size());
    detail::for_each_mode(d, n, [&](std::size_t lin, std::span<const int> k) {
        int parity = 0;
        for (int i = 0; i < d; ++i) parity ^= (k[i] & 1);
        out[lin] *= parity ? -scale : scale;
    });
    return Spectrum(d, n, std::move(out));
}

// Inverse transform: coefficients -> samples.
inline GridFunction synthesize(const Spectrum& s) {
    const int d = s.dim(), n = s.extent();
    std::vector<complex_t> tmp(s.coeffs());
    detail::for_each_mode(d, n, [&](std::size_t lin, std::span<const int> k) {
        int parity = 0;
        for (int i = 0; i < d; ++i) parity ^= (k[i] & 1);
        if (parity) tmp[lin] = -tmp[lin];
    });
    std::vector<complex_t> out(s.size());
    std::array<int, 3> extents{n, n, n};
    detail::FftEngine::instance().transform(d, extents, tmp.data(), out.data(),
                                            FFTW_BACKWARD);
    return GridFunction(d, n, std::move(out));
}

// Lp norm with respect to the normalized measure; p = infinity is the grid
// maximum of |f|.
inline double lp_norm(const GridFunction& f, const LebesgueExponent& p) {
    const auto& v = f.values();
    if (p.is_infinity()) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    const double pv = p.value();
    double acc = 0.0;
    if (pv == 1.0) {
        for (const auto& z : v) acc += std::abs(z);
    } else if (pv == 2.0) {
        for (const auto& z : v) acc += std::norm(z);
    } else {
        for (const auto& z : v) acc += std::pow(std::abs(z), pv);
    }
    acc /= static_cast<double>(v.size());
    return pv == 1.0 ? acc : (pv == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / pv));
}

// l2 norm straight from coefficients (Parseval for the normalized measure).
inline double l2_norm(const Spectrum& s) {
    double acc = 0.0;
    for (const auto& c : s.coeffs()) acc += std::norm(c);
    return std::sqrt(acc);
}

// Apply a scalar symbol g(k): coefficients become g(k) * c_k.
template <class Symbol>
Spectrum apply_symbol(const Spectrum& s, Symbol&& symbol) {
    std::vector<complex_t> out(s.coeffs());
    detail::for_each_mode(s.dim(), s.extent(),
                          [&](std::size_t lin, std::span<const int> k) {
                              out[lin] *= complex_t(symbol(k));
                          });
    return Spectrum(s.dim(), s.extent(), std::move(out));
}

// Translation f(. + delta): multiplier e^{i (k, delta)}.
inline Spectrum translate(const Spectrum& s, std::span<const double> delta) {
    if (static_cast<int>(delta.size()) != s.dim())
        throw std::invalid_argument("translate: step arity must match dimension");
    return apply_symbol(s, [&](std::span<const int> k) {
        double phase = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) phase += delta[i] * k[i];
        return std::polar(1.0, phase);
    });
}

// Point evaluation of the representative trigonometric polynomial by direct
// summation. O(size) per call; meant for sampling-style consumers, not grids.
inline complex_t eval_at(const Spectrum& s, std::span<const double> x) {
    if (static_cast<int>(x.size()) != s.dim())
        throw std::invalid_argument("eval_at: point arity must match dimension");
    complex_t acc = 0.0;
    detail::for_each_mode(s.dim(), s.extent(),
                          [&](std::size_t lin, std::span<const int> k) {
                              double phase = 0.0;
                              for (std::size_t i = 0; i < k.size(); ++i)
                                  phase += x[i] * k[i];
                              acc += s.coeffs()[lin] * std::polar(1.0, phase);
                          });
    return acc;
}

inline double max_abs_imag(const GridFunction& f) {
    double m = 0.0;
    for (const auto& z : f.values()) m = std::max(m, std::abs(z.imag()));
    return m;
}

}  // namespace smoothlab
