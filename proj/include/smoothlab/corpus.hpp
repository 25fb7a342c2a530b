#pragma once

// Named test functions with known smoothness, built directly from explicit
// Fourier coefficient formulas and truncated to the working band. Names are
// parsed from strings like "weierstrass(0.5)" so configs and reports can
// refer to functions by id.

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smoothlab/spectral.hpp"

namespace smoothlab {

struct CorpusName {
    std::string base;
    std::vector<double> params;
};

// "name" or "name(p1,p2,...)" with numeric parameters
inline CorpusName parse_corpus_name(const std::string& id) {
    CorpusName out;
    auto open = id.find('(');
    if (open == std::string::npos) {
        out.base = id;
        return out;
    }
    if (id.back() != ')')
        throw std::invalid_argument("corpus id: missing ')' in '" + id + "'");
    out.base = id.substr(0, open);
    std::string args = id.substr(open + 1, id.size() - open - 2);
    std::istringstream in(args);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        std::size_t used = 0;
        double v = std::stod(piece, &used);
        while (used < piece.size() && std::isspace(static_cast<unsigned char>(piece[used])))
            ++used;
        if (used != piece.size())
            throw std::invalid_argument("corpus id: bad parameter '" + piece + "'");
        out.params.push_back(v);
    }
    if (out.base.empty() || (args.empty() && !out.params.empty()))
        throw std::invalid_argument("corpus id: malformed '" + id + "'");
    return out;
}

namespace detail {

inline void add_mode_1d(Spectrum& s, int k, complex_t c) {
    s.mutable_coeffs()[s.index_of(std::array<int, 1>{k})] += c;
}

inline void require_params(const CorpusName& n, std::size_t count) {
    if (n.params.size() != count)
        throw std::invalid_argument("corpus '" + n.base + "': expected " +
                                    std::to_string(count) + " parameter(s)");
}

// uniform double in [-1, 1) from the raw engine stream; <random>
// distributions are not bit-stable across standard libraries, the engine is
inline double signed_unit(std::mt19937_64& gen) {
    return 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace detail

// |sin x| = 2/pi - (4/pi) sum_{m>=1} cos(2mx)/(4m^2-1), truncated to the band
inline Spectrum corpus_abs_sin(int n) {
    auto s = Spectrum::zero(1, n);
    detail::add_mode_1d(s, 0, 2.0 / pi);
    for (int m = 1; 2 * m <= n / 2; ++m) {
        double c = -(2.0 / pi) / (4.0 * m * m - 1.0);
        detail::add_mode_1d(s, 2 * m, c);
        detail::add_mode_1d(s, -2 * m, c);
    }
    return s;
}

// lacunary sum_{j} 2^{-j gamma} cos(2^j x), kept while 2^j fits the band;
// omega_1(f;h) behaves like h^gamma for gamma < 1
inline Spectrum corpus_weierstrass(double gamma, int n) {
    if (!(gamma > 0.0)) throw std::invalid_argument("weierstrass: gamma must be positive");
    auto s = Spectrum::zero(1, n);
    for (int j = 0; (1 << j) <= n / 2; ++j) {
        double c = 0.5 * std::pow(2.0, -gamma * j);
        detail::add_mode_1d(s, 1 << j, c);
        detail::add_mode_1d(s, -(1 << j), c);
    }
    return s;
}

// x/2 on (-pi, pi): coefficients (-1)^{k+1}/(2ik)
inline Spectrum corpus_sawtooth(int n) {
    auto s = Spectrum::zero(1, n);
    for (int k = 1; k < n / 2; ++k) {
        complex_t c = ((k % 2 == 0) ? -1.0 : 1.0) / complex_t(0.0, 2.0 * k);
        detail::add_mode_1d(s, k, c);
        detail::add_mode_1d(s, -k, -c);
    }
    return s;
}

// rapidly decaying spectrum exp(-k^2/64): an effectively analytic profile
inline Spectrum corpus_gaussian_smooth(int n) {
    auto s = Spectrum::zero(1, n);
    detail::add_mode_1d(s, 0, 1.0);
    for (int k = 1; k < n / 2; ++k) {
        double c = std::exp(-static_cast<double>(k) * k / 64.0);
        detail::add_mode_1d(s, k, c);
        detail::add_mode_1d(s, -k, c);
    }
    return s;
}

// real random trigonometric polynomial of the given degree; the seed fixes
// every coefficient
inline Spectrum corpus_random_trig(int degree, std::uint64_t seed, int n) {
    if (degree < 1 || degree >= n / 2)
        throw std::invalid_argument("random_trig: degree must lie in [1, n/2)");
    std::mt19937_64 gen(seed);
    auto s = Spectrum::zero(1, n);
    detail::add_mode_1d(s, 0, detail::signed_unit(gen));
    double scale = 1.0 / std::sqrt(static_cast<double>(degree));
    for (int k = 1; k <= degree; ++k) {
        complex_t c(detail::signed_unit(gen), detail::signed_unit(gen));
        c *= scale;
        detail::add_mode_1d(s, k, c);
        detail::add_mode_1d(s, -k, std::conj(c));
    }
    return s;
}

// 2-d lacunary shells: modes at distance 2^j along each axis, weight
// 2^{-j gamma}, i.e. 2^{-j gamma} (cos(2^j x_1) + cos(2^j x_2)) / 2
inline Spectrum corpus_radial_2d(double gamma, int n) {
    if (!(gamma > 0.0)) throw std::invalid_argument("radial_2d: gamma must be positive");
    auto s = Spectrum::zero(2, n);
    auto add = [&](int k1, int k2, double c) {
        s.mutable_coeffs()[s.index_of(std::array<int, 2>{k1, k2})] += c;
    };
    for (int j = 0; (1 << j) <= n / 2; ++j) {
        int m = 1 << j;
        double c = 0.25 * std::pow(2.0, -gamma * j);
        add(m, 0, c);
        add(-m, 0, c);
        add(0, m, c);
        add(0, -m, c);
    }
    return s;
}

// tensor product of two 1-d lacunary profiles with separate exponents
inline Spectrum corpus_tensor_2d(double gamma1, double gamma2, int n) {
    auto a = corpus_weierstrass(gamma1, n);
    auto b = corpus_weierstrass(gamma2, n);
    auto s = Spectrum::zero(2, n);
    auto& out = s.mutable_coeffs();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out[static_cast<std::size_t>(i) * n + j] = a.coeffs()[i] * b.coeffs()[j];
    return s;
}

// constant function, useful for degenerate rows
inline Spectrum corpus_const(int n) {
    auto s = Spectrum::zero(1, n);
    detail::add_mode_1d(s, 0, 1.0);
    return s;
}

inline Spectrum corpus_spectrum(const std::string& id, int n) {
    auto name = parse_corpus_name(id);
    if (name.base == "abs_sin") {
        detail::require_params(name, 0);
        return corpus_abs_sin(n);
    }
    if (name.base == "weierstrass") {
        detail::require_params(name, 1);
        return corpus_weierstrass(name.params[0], n);
    }
    if (name.base == "sawtooth") {
        detail::require_params(name, 0);
        return corpus_sawtooth(n);
    }
    if (name.base == "gaussian_smooth") {
        detail::require_params(name, 0);
        return corpus_gaussian_smooth(n);
    }
    if (name.base == "random_trig") {
        detail::require_params(name, 2);
        return corpus_random_trig(static_cast<int>(name.params[0]),
                                  static_cast<std::uint64_t>(name.params[1]), n);
    }
    if (name.base == "radial_2d") {
        detail::require_params(name, 1);
        return corpus_radial_2d(name.params[0], n);
    }
    if (name.base == "tensor_2d") {
        detail::require_params(name, 2);
        return corpus_tensor_2d(name.params[0], name.params[1], n);
    }
    if (name.base == "const") {
        detail::require_params(name, 0);
        return corpus_const(n);
    }
    throw std::invalid_argument("unknown corpus function '" + id + "'");
}

inline GridFunction corpus_generate(const std::string& id, int n) {
    return synthesize(corpus_spectrum(id, n));
}

// catalog of accepted name templates, for `corpus list` and error messages
inline std::vector<std::string> corpus_catalog() {
    return {
        "abs_sin",
        "weierstrass(gamma)",
        "sawtooth",
        "gaussian_smooth",
        "random_trig(degree,seed)",
        "radial_2d(gamma)",
        "tensor_2d(gamma1,gamma2)",
        "const",
    };
}

// the 1-d mix used by the equivalence sweeps: two rough lacunary profiles,
// the classical |sin| and sawtooth shapes, and three random polynomials
inline std::vector<std::string> default_corpus_1d() {
    return {
        "abs_sin",
        "weierstrass(0.5)",
        "weierstrass(1.5)",
        "sawtooth",
        "random_trig(16,1)",
        "random_trig(16,2)",
        "random_trig(16,3)",
    };
}

inline std::vector<std::string> default_corpus_2d() {
    return {
        "radial_2d(0.5)",
        "radial_2d(1.5)",
        "tensor_2d(0.5,1.5)",
    };
}

}  // namespace smoothlab
