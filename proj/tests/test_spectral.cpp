#include "smoothlab/spectral.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "oracles.hpp"

using smoothlab::GridFunction;
using smoothlab::LebesgueExponent;
using smoothlab::Spectrum;
using smoothlab::complex_t;
using smoothlab::pi;

namespace {

GridFunction grid_from_modes(const std::vector<oracle::Mode>& modes, int dim, int n) {
    return GridFunction(dim, n, oracle::sample_modes(modes, dim, n));
}

}  // namespace

TEST_CASE("analyze recovers explicit mode tables from directly summed samples") {
    const int n = 64;
    std::vector<oracle::Mode> modes = {
        {{0, 0, 0}, {0.5, 0.0}},
        {{3, 0, 0}, {1.0, -2.0}},
        {{-7, 0, 0}, {0.25, 0.125}},
        {{31, 0, 0}, {-1.0, 1.0}},
        {{-32, 0, 0}, {0.75, 0.0}},  // Nyquist row
    };
    auto s = analyze(grid_from_modes(modes, 1, n));
    for (const auto& m : modes) {
        complex_t got = s.coeff({m.k[0]});
        CHECK(std::abs(got - m.c) < 1e-12);
    }
    // Everything else stays numerically empty.
    complex_t stray = s.coeff({5});
    CHECK(std::abs(stray) < 1e-12);
}

TEST_CASE("analyze matches the direct coefficient sum on random band-limited input") {
    oracle::Rng rng(2026);
    for (int trial = 0; trial < 5; ++trial) {
        int dim = 1 + trial % 2;
        int n = dim == 1 ? 128 : 32;
        auto modes = oracle::random_modes(rng, dim, n / 4, 12);
        auto f = grid_from_modes(modes, dim, n);
        auto s = analyze(f);
        for (int probe = 0; probe < 10; ++probe) {
            std::array<int, 3> k{0, 0, 0};
            for (int i = 0; i < dim; ++i) k[i] = rng.next_int(-n / 4, n / 4);
            complex_t direct = oracle::dft_coefficient(f.values(), dim, n, k);
            complex_t got = s.coeff(std::span<const int>(k.data(), dim));
            CHECK(std::abs(got - direct) < 1e-11);
        }
    }
}

TEST_CASE("synthesize inverts analyze on arbitrary samples") {
    oracle::Rng rng(7);
    for (int dim : {1, 2, 3}) {
        int n = dim == 3 ? 8 : 64;
        std::size_t total = 1;
        for (int i = 0; i < dim; ++i) total *= n;
        std::vector<complex_t> values(total);
        for (auto& v : values) v = complex_t(rng.next_sym(), rng.next_sym());
        GridFunction f(dim, n, values);
        auto back = synthesize(analyze(f));
        double err = 0.0;
        for (std::size_t i = 0; i < total; ++i)
            err = std::max(err, std::abs(back.values()[i] - values[i]));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("lp_norm uses the normalized measure") {
    const int n = 1024;
    std::vector<complex_t> ones(n, complex_t(1.0, 0.0));
    GridFunction unit(1, n, ones);
    for (double p : {1.0, 2.0, 4.0}) {
        CHECK(lp_norm(unit, LebesgueExponent(p)) == Catch::Approx(1.0).margin(1e-14));
    }
    CHECK(lp_norm(unit, LebesgueExponent::infinity()) == Catch::Approx(1.0).margin(1e-14));

    // 2 cos(x): L1 = 4/pi, L2 = sqrt(2), Linf = 2 (grid quadrature; the kink
    // in |cos| limits L1 agreement to the Riemann error of the grid).
    std::vector<oracle::Mode> modes = {{{1, 0, 0}, {1.0, 0.0}}, {{-1, 0, 0}, {1.0, 0.0}}};
    auto f = grid_from_modes(modes, 1, n);
    CHECK(lp_norm(f, LebesgueExponent(1)) == Catch::Approx(4.0 / pi).margin(1e-5));
    CHECK(lp_norm(f, LebesgueExponent(2)) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
    CHECK(lp_norm(f, LebesgueExponent::infinity()) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("lp_norm is monotone in p") {
    oracle::Rng rng(99);
    auto modes = oracle::random_modes(rng, 1, 20, 8);
    auto f = grid_from_modes(modes, 1, 256);
    double n1 = lp_norm(f, LebesgueExponent(1));
    double n2 = lp_norm(f, LebesgueExponent(2));
    double n4 = lp_norm(f, LebesgueExponent(4));
    double ninf = lp_norm(f, LebesgueExponent::infinity());
    CHECK(n1 <= n2 + 1e-12);
    CHECK(n2 <= n4 + 1e-12);
    CHECK(n4 <= ninf + 1e-12);
}

TEST_CASE("translate applies the phase shift and matches pointwise resampling") {
    oracle::Rng rng(41);
    auto modes = oracle::random_modes(rng, 1, 30, 10);
    const int n = 128;
    auto s = analyze(grid_from_modes(modes, 1, n));
    const double delta = 0.37;
    auto shifted = synthesize(translate(s, std::array<double, 1>{delta}));
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
        double x = 2.0 * pi * j / n - pi + delta;
        complex_t want = oracle::eval_modes(modes, std::array<double, 1>{x});
        err = std::max(err, std::abs(shifted.values()[j] - want));
    }
    CHECK(err < 1e-11);
}

TEST_CASE("translate by one grid step is a cyclic shift") {
    oracle::Rng rng(5);
    auto modes = oracle::random_modes(rng, 1, 31, 6);
    const int n = 64;
    auto f = grid_from_modes(modes, 1, n);
    auto shifted = synthesize(translate(analyze(f), std::array<double, 1>{2.0 * pi / n}));
    double err = 0.0;
    for (int j = 0; j < n; ++j)
        err = std::max(err, std::abs(shifted.values()[j] - f.values()[(j + 1) % n]));
    CHECK(err < 1e-12);
}

TEST_CASE("apply_symbol with ik differentiates") {
    const int n = 64;
    // sin(3x) -> 3 cos(3x)
    std::vector<oracle::Mode> sin3 = {{{3, 0, 0}, {0.0, -0.5}}, {{-3, 0, 0}, {0.0, 0.5}}};
    std::vector<oracle::Mode> want = {{{3, 0, 0}, {1.5, 0.0}}, {{-3, 0, 0}, {1.5, 0.0}}};
    auto s = analyze(grid_from_modes(sin3, 1, n));
    auto ds = apply_symbol(s, [](std::span<const int> k) {
        return complex_t(0.0, static_cast<double>(k[0]));
    });
    auto g = synthesize(ds);
    auto ref = grid_from_modes(want, 1, n);
    double err = 0.0;
    for (int j = 0; j < n; ++j) err = std::max(err, std::abs(g.values()[j] - ref.values()[j]));
    CHECK(err < 1e-12);
}

TEST_CASE("real input yields Hermitian coefficients") {
    oracle::Rng rng(17);
    const int n = 64;
    std::vector<complex_t> values(n);
    for (auto& v : values) v = complex_t(rng.next_sym(), 0.0);
    auto s = analyze(GridFunction(1, n, values));
    for (int k = 1; k < n / 2; ++k) {
        complex_t a = s.coeff({k});
        complex_t b = s.coeff({-k});
        CHECK(std::abs(a - std::conj(b)) < 1e-12);
    }
    CHECK(std::abs(s.coeff({-n / 2}).imag()) < 1e-12);
}

TEST_CASE("l2_norm agrees with the grid L2 norm") {
    oracle::Rng rng(23);
    auto modes = oracle::random_modes(rng, 1, 40, 15);
    auto f = grid_from_modes(modes, 1, 256);
    CHECK(smoothlab::l2_norm(analyze(f)) ==
          Catch::Approx(lp_norm(f, LebesgueExponent(2))).epsilon(1e-12));
}

TEST_CASE("eval_at reproduces the representative polynomial off-grid") {
    oracle::Rng rng(31);
    auto modes = oracle::random_modes(rng, 2, 6, 8);
    auto s = analyze(grid_from_modes(modes, 2, 32));
    std::array<double, 2> x{0.713, -2.191};
    complex_t want = oracle::eval_modes(modes, x);
    CHECK(std::abs(smoothlab::eval_at(s, x) - want) < 1e-10);
}

TEST_CASE("shape validation rejects bad constructions") {
    CHECK_THROWS_AS(GridFunction::zero(4, 64), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction::zero(1, 48), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction::zero(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(LebesgueExponent(0.5), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(1, 64, std::vector<complex_t>(63)),
                    std::invalid_argument);
    auto s = Spectrum::zero(1, 64);
    CHECK_THROWS_AS(s.coeff({64}), std::out_of_range);
}
