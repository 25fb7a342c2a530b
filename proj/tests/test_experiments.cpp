#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "smoothlab/experiments.hpp"
#include "oracles.hpp"

using namespace smoothlab;

namespace {

ExperimentConfig tiny_config(const std::string& kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.resolution = 64;
    return cfg;
}

std::size_t count_flag(const std::vector<EquivalenceRow>& rows, const std::string& flag) {
    std::size_t n = 0;
    for (const auto& r : rows)
        if (r.flag == flag) ++n;
    return n;
}

}  // namespace

TEST_CASE("config parsing: defaults fill in and strings survive") {
    auto cfg = parse_experiment_config(R"({"experiment": "equiv_2_2"})");
    CHECK(cfg.kind == "equiv_2_2");
    CHECK(cfg.resolution == 1024);
    CHECK(cfg.order == 2);
    CHECK(cfg.corpus.size() == 7);
    REQUIRE(cfg.p_list.size() == 3);
    CHECK(cfg.p_list[0] == 1.0);
    CHECK(std::isinf(cfg.p_list[2]));
    REQUIRE(!cfg.grid.empty());
    CHECK(cfg.grid.front() == two_pi / 256.0);
    CHECK(cfg.grid.back() <= 1.0 / 3.0);

    auto planar = parse_experiment_config(R"({"experiment": "equiv_3_4"})");
    CHECK(planar.resolution == 256);
    CHECK(planar.corpus == default_corpus_2d());
    CHECK(planar.order == 1);

    auto custom = parse_experiment_config(
        R"({"experiment": "equiv_2_3", "corpus": ["sawtooth"], "p": [2, "inf"],
            "grid": [8, 16], "resolution": 128, "seed": 7, "out": "rows.csv"})");
    CHECK(custom.corpus == std::vector<std::string>{"sawtooth"});
    REQUIRE(custom.p_list.size() == 2);
    CHECK(custom.p_list[0] == 2.0);
    CHECK(std::isinf(custom.p_list[1]));
    CHECK(custom.seed == 7);
    CHECK(custom.out == "rows.csv");
}

TEST_CASE("config parsing: malformed input is rejected") {
    CHECK_THROWS_AS(parse_experiment_config("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_config("[1,2]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_config(R"({"experiment": "no_such_kind"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_config(R"({"experiment": "equiv_2_2", "bogus": 1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_experiment_config(R"({"experiment": "equiv_2_2", "resolution": 100})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_experiment_config(R"({"experiment": "equiv_2_2", "resolution": 4})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_experiment_config(R"({"experiment": "equiv_2_2", "grid": [0.1, -0.5]})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_experiment_config(R"({"experiment": "equiv_2_2", "p": ["sup"]})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_experiment_config(R"({"experiment": "kfunc_lemma", "method": "abel"})"),
        std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_config(R"({"experiment": "equiv_2_2", "order": "x"})"),
                    std::invalid_argument);
}

TEST_CASE("dimension mismatches between corpus and kind are rejected") {
    auto cfg = tiny_config("equiv_3_4");
    cfg.corpus = {"sawtooth"};
    cfg.grid = {0.25};
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);

    auto flat = tiny_config("equiv_2_2");
    flat.corpus = {"radial_2d(1.0)"};
    flat.grid = {0.25};
    CHECK_THROWS_AS(run_experiment(flat), std::invalid_argument);
}

TEST_CASE("constant corpus members are excluded, not reported as small ratios") {
    auto cfg = tiny_config("equiv_2_3");
    cfg.corpus = {"const"};
    cfg.grid = {8, 16};
    cfg.p_list = {2.0};
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.flag == "excluded");
        CHECK(r.ratio == 0.0);
        CHECK(r.lhs < 1e-12);  // the means reproduce constants exactly
    }
}

TEST_CASE("sup and averaged modulus stay within a fixed band on a rough function") {
    auto cfg = tiny_config("equiv_2_2");
    cfg.resolution = 256;
    cfg.corpus = {"abs_sin"};
    cfg.grid = {0.05, 0.1, 0.2};
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 9);
    for (const auto& r : rows) {
        CHECK(r.flag == "ok");
        CHECK(r.ratio > 0.2);
        CHECK(r.ratio < 5.0);
    }
    // rows are sorted by (experiment, function, p, param)
    for (std::size_t i = 1; i < rows.size(); ++i) {
        bool ordered = rows[i - 1].p < rows[i].p ||
                       (rows[i - 1].p == rows[i].p && rows[i - 1].param < rows[i].param);
        CHECK(ordered);
    }
}

TEST_CASE("best-approximation sweep tracks the modulus on the sawtooth") {
    auto cfg = tiny_config("equiv_2_3");
    cfg.resolution = 256;
    cfg.corpus = {"sawtooth"};
    cfg.order = 1;
    cfg.grid = {8, 16, 32};
    cfg.p_list = {2.0};
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.flag == "ok");
        CHECK(r.ratio > 0.05);
        CHECK(r.ratio < 20.0);
    }
}

TEST_CASE("planar axes sweep produces paired rows with finite three-way ratios") {
    auto cfg = tiny_config("equiv_3_5");
    cfg.resolution = 32;
    cfg.corpus = {"radial_2d(1.5)"};
    cfg.grid = {1.0 / 4.0, 1.0 / 8.0};
    cfg.p_list = {2.0};
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 4);
    std::size_t err_rows = 0, k_rows = 0;
    for (const auto& r : rows) {
        CHECK(r.flag == "ok");
        CHECK(r.ratio > 1e-3);
        CHECK(r.ratio < 1e3);
        if (r.experiment == "equiv_3_5/err_vs_mod") ++err_rows;
        if (r.experiment == "equiv_3_5/K_vs_err") ++k_rows;
    }
    CHECK(err_rows == 2);
    CHECK(k_rows == 2);
}

TEST_CASE("marcinkiewicz sweep runs at the infinity default") {
    auto cfg = tiny_config("equiv_3_6");
    cfg.resolution = 32;
    cfg.corpus = {"tensor_2d(1.0,1.5)"};
    cfg.grid = {4, 8};
    cfg.truncation_U = 16.0;
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(std::isinf(r.p));
        CHECK((r.flag == "ok" || r.flag == "tail"));
        if (r.flag == "ok" || r.flag == "tail") {
            CHECK(r.ratio > 1e-3);
            CHECK(r.ratio < 1e3);
        }
    }
}

TEST_CASE("lemma configuration reproduces the exact Fejer constants at p = 2") {
    auto cfg = tiny_config("kfunc_lemma");
    cfg.resolution = 128;
    cfg.corpus = {"random_trig(8,1)", "gaussian_smooth"};
    cfg.grid = {1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0};
    auto rows = run_experiment(cfg);
    // 2 functions x 3 steps plus the three summary rows
    REQUIRE(rows.size() == 9);
    double a_alpha = -1.0, a_beta = -1.0, a_gamma = -1.0;
    for (const auto& r : rows) {
        if (r.experiment == "kfunc_lemma/a_alpha") a_alpha = r.lhs;
        if (r.experiment == "kfunc_lemma/a_beta") a_beta = r.lhs;
        if (r.experiment == "kfunc_lemma/a_gamma") a_gamma = r.lhs;
        if (r.experiment == "kfunc_lemma/K_vs_err") {
            CHECK(r.flag == "ok");
            CHECK(r.ratio > 0.0);
        }
    }
    CHECK(a_alpha >= 1.0);
    CHECK(a_beta >= 0.0);
    CHECK(a_gamma >= 0.0);
    CHECK(a_alpha < 10.0);
    CHECK(a_gamma < 10.0);
    // K <= (1 + a_gamma) err and err <= (1 + a_alpha) K pointwise
    for (const auto& r : rows) {
        if (r.experiment != "kfunc_lemma/K_vs_err" || r.flag != "ok") continue;
        CHECK(r.ratio <= 1.0 + a_gamma + 1e-9);
        CHECK(r.ratio >= 1.0 / (1.0 + a_alpha) - 1e-9);
    }
}

TEST_CASE("banach suite rows respect the proved inequalities") {
    auto cfg = tiny_config("banach_suite");
    cfg.resolution = 128;
    cfg.corpus = {"random_trig(6,5)"};
    cfg.grid = {0.1, 0.2};
    cfg.p_list = {2.0, std::numeric_limits<double>::infinity()};
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 16);
    for (const auto& r : rows) {
        CHECK(r.flag == "ok");
        if (r.experiment == "banach_suite/scaling")
            CHECK(r.ratio <= 1.0 + 1e-9);  // w(2h) <= 2^r w(h)
        if (r.experiment == "banach_suite/marchaud")
            CHECK(r.ratio <= 1.0 + 0.02);  // w_r bounded by the dyadic sum
        if (r.experiment == "banach_suite/steklov_approx")
            CHECK(r.ratio <= 1.0 + 1e-6);
        if (r.experiment == "banach_suite/steklov_seminorm")
            CHECK(r.ratio <= 1.0 + 1e-6);
        CHECK(r.ratio > 0.0);
    }
}

TEST_CASE("wiener scan reports positive minima and the known limits") {
    ExperimentConfig cfg;
    cfg.kind = "wiener_scan";
    cfg.grid = {1, 2};
    auto rows = run_experiment(cfg);
    bool saw_min = false, saw_zero = false, saw_tail = false, saw_norm = false;
    for (const auto& r : rows) {
        CHECK(r.p == 0.0);
        CHECK(r.flag == "ok");
        if (r.experiment == "wiener_scan/psi_min") {
            saw_min = true;
            CHECK(r.lhs > 0.0);
        }
        if (r.experiment == "wiener_scan/transition_zero") {
            saw_zero = true;
            CHECK(std::abs(r.ratio - 1.0) < 1e-5);
        }
        if (r.experiment == "wiener_scan/tail_limit") {
            saw_tail = true;
            CHECK(std::abs(r.ratio - 1.0) < 0.02);
        }
        if (r.experiment == "wiener_scan/a_norm_fejer") {
            saw_norm = true;
            CHECK(std::abs(r.lhs - 1.0) < 1e-2);
        }
    }
    CHECK(saw_min);
    CHECK(saw_zero);
    CHECK(saw_tail);
    CHECK(saw_norm);
}

TEST_CASE("CSV round trip preserves every field") {
    auto cfg = tiny_config("equiv_2_2");
    cfg.resolution = 64;
    cfg.corpus = {"weierstrass(1.5)"};
    cfg.grid = {0.1, 0.2};
    auto rows = run_experiment(cfg);
    auto text = rows_to_csv(rows);
    CHECK(text.rfind("experiment,function,p,param,lhs,rhs,ratio,flag\n", 0) == 0);

    auto back = rows_from_csv(text);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].experiment == rows[i].experiment);
        CHECK(back[i].function == rows[i].function);
        CHECK(back[i].p == rows[i].p);  // %.17g keeps doubles exact, inf included
        CHECK(back[i].param == rows[i].param);
        CHECK(back[i].lhs == rows[i].lhs);
        CHECK(back[i].rhs == rows[i].rhs);
        CHECK(back[i].ratio == rows[i].ratio);
        CHECK(back[i].flag == rows[i].flag);
    }
    CHECK_THROWS_AS(rows_from_csv("p,q\n1,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(rows_to_csv({}), std::invalid_argument);
}

TEST_CASE("identical configs give byte-identical CSV output") {
    auto cfg = tiny_config("equiv_2_3");
    cfg.resolution = 128;
    cfg.corpus = {"random_trig(8,3)", "abs_sin"};
    cfg.grid = {8, 16};
    auto first = rows_to_csv(run_experiment(cfg));
    auto second = rows_to_csv(run_experiment(cfg));
    CHECK(first == second);
}

TEST_CASE("thread cap does not change the result") {
    auto cfg = tiny_config("equiv_2_2");
    cfg.resolution = 128;
    cfg.corpus = {"abs_sin", "weierstrass(0.5)", "sawtooth"};
    cfg.grid = {0.05, 0.1, 0.2, 0.4};

    setenv("SMOOTHLAB_THREADS", "1", 1);
    auto serial = rows_to_csv(run_experiment(cfg));
    setenv("SMOOTHLAB_THREADS", "4", 1);
    auto parallel = rows_to_csv(run_experiment(cfg));
    unsetenv("SMOOTHLAB_THREADS");
    CHECK(serial == parallel);
}

TEST_CASE("plot data emits one log-log block per series") {
    auto cfg = tiny_config("equiv_2_2");
    cfg.resolution = 64;
    cfg.corpus = {"weierstrass(1.0)"};
    cfg.grid = {0.1, 0.2, 0.4};
    cfg.p_list = {2.0};
    auto rows = run_experiment(cfg);
    auto plot = rows_to_plotdata(rows);
    CHECK(plot.find("# equiv_2_2 weierstrass(1.0) p=2 lhs") != std::string::npos);
    CHECK(plot.find("# equiv_2_2 weierstrass(1.0) p=2 rhs") != std::string::npos);

    // each block has three data lines; slopes of both sides agree with the
    // smoothness exponent (gamma = 1 here, order 2 modulus, small h)
    double slope_l = loglog_slope(rows, "equiv_2_2", "weierstrass(1.0)", 2.0, true);
    double slope_r = loglog_slope(rows, "equiv_2_2", "weierstrass(1.0)", 2.0, false);
    CHECK(std::abs(slope_l - 1.0) < 0.35);
    CHECK(std::abs(slope_r - 1.0) < 0.35);
    CHECK_THROWS_AS(loglog_slope(rows, "equiv_2_2", "missing", 2.0, true),
                    std::invalid_argument);
}

TEST_CASE("excluded-denominator rows never reach the plot data") {
    auto cfg = tiny_config("equiv_2_3");
    cfg.corpus = {"const"};
    cfg.grid = {8};
    cfg.p_list = {2.0};
    auto rows = run_experiment(cfg);
    REQUIRE(count_flag(rows, "excluded") == rows.size());
    auto plot = rows_to_plotdata(rows);
    CHECK(plot.find("# ") == std::string::npos);  // nothing positive to plot
}
