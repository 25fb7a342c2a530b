#include "smoothlab/banach.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "oracles.hpp"
#include "smoothlab/moduli.hpp"

using namespace smoothlab;

namespace {

AbstractFunction scalar_map(std::function<double(double)> f) {
    return AbstractFunction{[f = std::move(f)](std::span<const double> x) {
        return std::vector<double>{f(x[0])};
    }};
}

AbstractFunction linear_map(std::vector<double> v) {
    return AbstractFunction{[v = std::move(v)](std::span<const double> x) {
        double acc = 0.0;
        for (std::size_t a = 0; a < v.size(); ++a) acc += v[a] * x[a];
        return std::vector<double>{acc};
    }};
}

Spectrum cosine_spectrum(int n) {
    auto s = Spectrum::zero(1, n);
    s.mutable_coeffs()[s.index_of(std::array<int, 1>{1})] = 0.5;
    s.mutable_coeffs()[s.index_of(std::array<int, 1>{-1})] = 0.5;
    return s;
}

// exact uniform modulus of cos(pi x) seen through a unit step budget:
// omega_r(h) = (2 sin(pi h / 2))^r for pi h <= pi
double cosine_modulus(int r, double h) {
    return std::pow(2.0 * std::sin(pi * h / 2.0), r);
}

}  // namespace

TEST_CASE("norm handles satisfy the axioms, broken ones are flagged") {
    CHECK(check_norm_axioms(NormedSpaceHandle::euclidean(3)) < 1e-10);
    CHECK(check_norm_axioms(NormedSpaceHandle::lp(2, 1.0)) < 1e-10);
    CHECK(check_norm_axioms(
              NormedSpaceHandle::lp(4, std::numeric_limits<double>::infinity())) < 1e-10);

    // squaring the first coordinate breaks homogeneity
    auto broken = NormedSpaceHandle::euclidean(2);
    broken.norm = [](std::span<const double> x) {
        return x[0] * x[0] + std::abs(x[1]);
    };
    CHECK(check_norm_axioms(broken) > 0.1);

    CHECK_THROWS_AS(NormedSpaceHandle::lp(0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(NormedSpaceHandle::lp(2, 0.5), std::invalid_argument);
}

TEST_CASE("alternating differences annihilate polynomials and match the symbol") {
    auto e2 = NormedSpaceHandle::euclidean(2);

    AbstractFunction constant{[](std::span<const double>) {
        return std::vector<double>{3.0, -1.0};
    }};
    AbstractFunction affine{[](std::span<const double> x) {
        return std::vector<double>{2.0 * x[0] - x[1] + 5.0, x[0] + 4.0 * x[1]};
    }};
    std::vector<double> x{0.3, -0.2}, delta{0.11, 0.07};
    for (int r = 1; r <= 3; ++r)
        CHECK(e2.norm(abstract_difference(constant, x, delta, r)) < 1e-13);
    CHECK(e2.norm(abstract_difference(affine, x, delta, 2)) < 1e-12);
    CHECK(e2.norm(abstract_difference(affine, x, delta, 3)) < 1e-12);

    // scalar cosine against the complex closed form Re[(1 - e^{i d})^r e^{i x}]
    auto cosf = scalar_map([](double t) { return std::cos(t); });
    for (int r : {1, 2, 3}) {
        double xx = 0.7, dd = 0.37;
        auto got = abstract_difference(cosf, std::array<double, 1>{xx},
                                       std::array<double, 1>{dd}, r);
        complex_t unit = 1.0 - std::polar(1.0, dd);
        complex_t acc = std::polar(1.0, xx);
        for (int i = 0; i < r; ++i) acc *= unit;
        CHECK(std::abs(got[0] - acc.real()) < 1e-12);
    }

    // integer order through the fractional path reproduces the integer weights
    auto gi = abstract_difference(cosf, std::array<double, 1>{0.4},
                                  std::array<double, 1>{0.25}, 2);
    auto gf = abstract_difference_fractional(cosf, std::array<double, 1>{0.4},
                                             std::array<double, 1>{0.25}, 2.0);
    CHECK(std::abs(gi[0] - gf[0]) < 1e-14);

    // truncated fractional weights nearly cancel on constants; the partial
    // sums telescope to C(r-1, M) ~ M^{1-r}, so r = 1.5 with M ~ 1e4 kept
    // terms lands near 1e-6
    auto cf = abstract_difference_fractional(constant, x, delta, 1.5, 1e-10);
    CHECK(e2.norm(cf) < 1e-5);
}

TEST_CASE("cloud modulus: linear maps and periodic scalars") {
    CloudOptions opt;

    auto e1 = NormedSpaceHandle::euclidean(2);
    auto e2 = NormedSpaceHandle::euclidean(1);
    AbstractFunction constant{[](std::span<const double>) {
        return std::vector<double>{7.0};
    }};
    CHECK(abstract_modulus(constant, e1, e2, 1, 0.3, opt) < 1e-13);

    // linear map: Delta_d f = <v, d>, so the modulus is h |v|_2 exactly
    std::vector<double> v{0.6, -0.8};
    auto lin = linear_map(v);
    double vn = std::hypot(v[0], v[1]);
    for (double h : {0.5, 0.125}) {
        double got = abstract_modulus(lin, e1, e2, 1, h, opt);
        CHECK(got <= h * vn * (1.0 + 1e-12));
        CHECK(got >= h * vn * 0.98);
    }

    // cos(pi x) on [-1, 1] covers a full period, so the cloud sup matches the
    // closed-form uniform modulus and the grid-based one
    auto r1 = NormedSpaceHandle::euclidean(1);
    auto cospi = scalar_map([](double t) { return std::cos(pi * t); });
    auto f = cosine_spectrum(128);
    for (int r : {1, 2}) {
        double h = 0.25;
        double cloud = abstract_modulus(cospi, r1, r1, r, h, opt);
        double exact = cosine_modulus(r, h);
        CHECK(cloud <= exact * (1.0 + 1e-9));
        CHECK(cloud >= exact * 0.98);
        double grid = classical_modulus(f, r, StepSet::segment({1.0}), pi * h,
                                        LebesgueExponent::infinity());
        CHECK(std::abs(cloud - grid) < 0.03 * exact);
    }

    CHECK_THROWS_AS(abstract_modulus(lin, e1, e2, 1, 0.0, opt), std::invalid_argument);
}

TEST_CASE("splitting a coarse difference over a fine step is exact") {
    auto e2 = NormedSpaceHandle::euclidean(2);
    AbstractFunction smooth{[](std::span<const double> x) {
        return std::vector<double>{std::sin(x[0]) * std::exp(0.3 * x[1]),
                                   std::cos(2.0 * x[0] - x[1])};
    }};
    std::vector<double> x{0.2, -0.4}, delta{0.05, 0.03};
    CHECK(identity_star_residual(smooth, e2, x, delta, 1, 2) < 1e-12);
    CHECK(identity_star_residual(smooth, e2, x, delta, 2, 3) < 1e-12);
    CHECK(identity_star_residual(smooth, e2, x, delta, 3, 2) < 1e-12);

    AbstractFunction constant{[](std::span<const double>) {
        return std::vector<double>{1.0, 2.0};
    }};
    CHECK(identity_star_residual(constant, e2, x, delta, 2, 4) < 1e-13);
}

TEST_CASE("dyadic chain bound dominates the lower-order modulus") {
    CloudOptions opt;
    auto r1 = NormedSpaceHandle::euclidean(1);
    auto cospi = scalar_map([](double t) { return std::cos(pi * t); });

    for (int r : {1, 2}) {
        double h = 0.05;
        double lhs = abstract_modulus(cospi, r1, r1, r, h, opt);
        for (int k : {0, 3})
            CHECK(marchaud_rhs(cospi, r1, r1, r, h, k, opt) >= lhs * 0.97);
    }

    AbstractFunction constant{[](std::span<const double>) {
        return std::vector<double>{4.0};
    }};
    CHECK(marchaud_rhs(constant, r1, r1, 1, 0.1, 2, opt) < 1e-12);
}

TEST_CASE("step scaling: integer blowup, general steps, and the order chain") {
    CloudOptions opt;
    auto r1 = NormedSpaceHandle::euclidean(1);
    auto cospi = scalar_map([](double t) { return std::cos(pi * t); });

    double h = 0.08;
    for (int r : {1, 2}) {
        double base = abstract_modulus(cospi, r1, r1, r, h, opt);
        for (int n : {2, 3})
            CHECK(abstract_modulus(cospi, r1, r1, r, n * h, opt) <=
                  std::pow(n, r) * base * 1.02);
        double lam = 1.7;
        CHECK(abstract_modulus(cospi, r1, r1, r, lam * h, opt) <=
              std::pow(lam + 1.0, r) * base * 1.02);
    }

    double w1 = abstract_modulus(cospi, r1, r1, 1, h, opt);
    double w2 = abstract_modulus(cospi, r1, r1, 2, h, opt);
    double sup = sup_norm(cospi, r1, r1, opt);
    CHECK(w2 <= 2.0 * w1 * 1.02);
    CHECK(w1 <= 2.0 * sup * 1.02);
    CHECK(sup <= 1.0 + 1e-12);
    CHECK(sup >= 0.99);
}

TEST_CASE("vanishing higher modulus forces exact power growth in the step") {
    CloudOptions opt;

    // linear: omega_2 vanishes, so omega_1(h) = omega_1(1) h on the shared cloud
    auto e1 = NormedSpaceHandle::euclidean(3);
    auto e2 = NormedSpaceHandle::euclidean(1);
    auto lin = linear_map({0.5, -1.0, 0.25});
    double base1 = abstract_modulus(lin, e1, e2, 1, 1.0, opt);
    for (double h : {0.5, 0.2})
        CHECK(abstract_modulus(lin, e1, e2, 1, h, opt) ==
              Catch::Approx(base1 * h).epsilon(1e-9));

    // quadratic along a direction: omega_3 vanishes and omega_2 scales as h^2
    AbstractFunction quad2{[](std::span<const double> x) {
        double s = 0.7 * x[0] - 0.3 * x[1];
        return std::vector<double>{s * s};
    }};
    auto q1 = NormedSpaceHandle::euclidean(2);
    double base2 = abstract_modulus(quad2, q1, e2, 2, 1.0, opt);
    for (double h : {0.5, 0.25})
        CHECK(abstract_modulus(quad2, q1, e2, 2, h, opt) ==
              Catch::Approx(base2 * h * h).epsilon(1e-9));
}

TEST_CASE("cross-order comparison constant stays near one for the cosine") {
    CloudOptions opt;
    auto r1 = NormedSpaceHandle::euclidean(1);
    auto cospi = scalar_map([](double t) { return std::cos(pi * t); });

    // omega_2(1) omega_1(h)^2 <= c omega_1(1)^2 omega_2(h); for the cosine the
    // two sides coincide, so the measured c hugs 1
    double w1_1 = abstract_modulus(cospi, r1, r1, 1, 1.0, opt);
    double w2_1 = abstract_modulus(cospi, r1, r1, 2, 1.0, opt);
    for (double h : {0.5, 0.25}) {
        double w1 = abstract_modulus(cospi, r1, r1, 1, h, opt);
        double w2 = abstract_modulus(cospi, r1, r1, 2, h, opt);
        double c = (w2_1 * w1 * w1) / (w1_1 * w1_1 * w2);
        CHECK(c <= 1.02);
        CHECK(c >= 0.95);
    }
}

TEST_CASE("product rule: exact for first order, measured constant above") {
    CloudOptions opt;
    auto r1 = NormedSpaceHandle::euclidean(1);
    auto f = scalar_map([](double t) { return std::cos(pi * t); });
    auto g = scalar_map([](double t) { return std::sin(pi * t); });
    auto mul = [](std::span<const double> a, std::span<const double> b) {
        return std::vector<double>{a[0] * b[0]};
    };

    auto rep1 = product_modulus_check(f, g, mul, r1, r1, 1, 0.25, opt);
    CHECK(rep1.pass);
    CHECK(rep1.lhs <= rep1.bracket * (1.0 + 1e-9));
    CHECK(rep1.lhs > 0.0);

    auto rep2 = product_modulus_check(f, g, mul, r1, r1, 2, 0.25, opt);
    CHECK(rep2.pass);
    CHECK(rep2.c_required <= 1.5);

    AbstractFunction ca{[](std::span<const double>) { return std::vector<double>{2.0}; }};
    AbstractFunction cb{[](std::span<const double>) { return std::vector<double>{-3.0}; }};
    auto rep0 = product_modulus_check(ca, cb, mul, r1, r1, 1, 0.25, opt);
    CHECK(rep0.lhs < 1e-13);
    CHECK(rep0.c_required == 0.0);
    CHECK(rep0.pass);
}

TEST_CASE("Steklov means: averaged-translate oracle and proof-line bounds") {
    // constants are fixed points
    auto flat = Spectrum::zero(1, 32);
    flat.mutable_coeffs()[flat.index_of(std::array<int, 1>{0})] = 2.5;
    auto rep_flat = steklov_report(flat, 2, 0.3, LebesgueExponent::infinity());
    CHECK(rep_flat.approx_error < 1e-13);
    CHECK(rep_flat.seminorm < 1e-13);
    CHECK(rep_flat.pass);

    // value at x = 0 against the iterated-average definition computed by
    // adaptive quadrature: r = 1 gives sin(h)/h, r = 2 the double average of
    // 2 cos(u+v) - cos(2(u+v))
    auto f = cosine_spectrum(64);
    double h = 0.2;
    {
        auto mean = steklov_mean(f, 1, h);
        complex_t at0 = 0.0;
        for (auto c : mean.coeffs()) at0 += c;
        CHECK(std::abs(at0 - complex_t(std::sin(h) / h, 0.0)) < 1e-12);
    }
    {
        auto mean = steklov_mean(f, 2, h);
        complex_t at0 = 0.0;
        for (auto c : mean.coeffs()) at0 += c;
        double want = oracle::integrate(
            [&](double u) {
                return oracle::integrate(
                    [&](double w) {
                        return 2.0 * std::cos(u + w) - std::cos(2.0 * (u + w));
                    },
                    0.0, h);
            },
            0.0, h) / (h * h);
        CHECK(std::abs(at0 - complex_t(want, 0.0)) < 1e-10);
    }

    for (auto p : {LebesgueExponent(2.0), LebesgueExponent::infinity()}) {
        auto rep = steklov_report(f, 1, 0.2, p);
        CHECK(rep.pass);
        CHECK(rep.approx_error > 0.0);
        CHECK(rep.approx_error <= rep.modulus_rh * (1.0 + 1e-9));
        CHECK(rep.seminorm <= rep.seminorm_bound * (1.0 + 1e-9));
    }

    // a rougher mix keeps both bounds honest at higher order
    oracle::Rng rng(911);
    auto modes = oracle::random_modes(rng, 1, 6, 5);
    auto mixed = analyze(GridFunction(1, 64, oracle::sample_modes(modes, 1, 64)));
    for (auto p : {LebesgueExponent(1.0), LebesgueExponent(2.0),
                   LebesgueExponent::infinity()}) {
        auto rep = steklov_report(mixed, 2, 0.3, p);
        CHECK(rep.pass);
    }

    CHECK_THROWS_AS(steklov_mean(f, 0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(steklov_mean(f, 1, 0.0), std::invalid_argument);
}

TEST_CASE("vanishing-step ratios recover the seminorm") {
    CloudOptions opt;
    auto e1 = NormedSpaceHandle::euclidean(2);
    auto e2 = NormedSpaceHandle::euclidean(1);

    // linear map: omega_1(h)/h is the same number at every step
    auto lin = linear_map({0.6, -0.8});
    std::vector<double> steps{1.0, 0.5, 0.25};
    auto sl = seminorm_limit(lin, e1, e2, 1, steps, opt);
    CHECK(sl.sup_ratio == Catch::Approx(sl.limit_ratio).epsilon(1e-12));
    CHECK(sl.limit_ratio == Catch::Approx(1.0).epsilon(0.02));

    // cos(pi x): omega_2(h)/h^2 = (2 sin(pi h/2))^2 / h^2 climbs to pi^2
    auto r1 = NormedSpaceHandle::euclidean(1);
    auto cospi = scalar_map([](double t) { return std::cos(pi * t); });
    std::vector<double> fine{1.0, 0.5, 0.25, 0.125};
    auto sc = seminorm_limit(cospi, r1, r1, 2, fine, opt);
    CHECK(sc.sup_ratio <= sc.limit_ratio * 1.02);
    CHECK(sc.limit_ratio == Catch::Approx(pi * pi).epsilon(0.05));

    std::vector<double> bad{0.5, 0.5};
    CHECK_THROWS_AS(seminorm_limit(lin, e1, e2, 1, bad, opt), std::invalid_argument);
}
