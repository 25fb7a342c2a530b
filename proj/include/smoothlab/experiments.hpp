#pragma once

// Equivalence-sweep engine. Each experiment kind evaluates the two (or
// three) sides of one order-equivalence across a corpus x parameter x p
// grid and reports plain rows; nothing here asserts constants, the rows are
// for banding and slope fits downstream. Output is byte-stable: fixed row
// ordering, fixed float formatting, and sampling driven only by the config.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "smoothlab/banach.hpp"
#include "smoothlab/corpus.hpp"
#include "smoothlab/kfunctional.hpp"
#include "smoothlab/moduli.hpp"
#include "smoothlab/multipliers.hpp"
#include "smoothlab/spectral.hpp"
#include "smoothlab/symbols.hpp"
#include "smoothlab/wiener.hpp"

namespace smoothlab {

struct ExperimentConfig {
    std::string kind;
    std::vector<std::string> corpus;
    int resolution = 0;            // 0: dimension default (1024 for d=1, 256 for d=2)
    std::vector<double> p_list;    // Lebesgue exponents; inf allowed
    std::vector<double> grid;      // h, eps, n, or order values depending on kind
    int order = 0;                 // difference order r; 0 picks the kind default
    double alpha = 0.0;            // smoothness exponent; 0 picks the kind default
    double beta = 1.0;             // Riesz-type smoothing exponent
    double kernel_q = 0.0;         // kernel weight exponent; 0: per-kind default
    double truncation_U = 64.0;    // kernel truncation radius
    std::string method = "fejer";  // kfunc_lemma: "fejer" or "riesz"
    std::uint64_t seed = 1;        // reserved for sampling-based kinds
    std::string out;               // optional default output path
};

struct EquivalenceRow {
    std::string experiment;
    std::string function;
    double p = 0.0;  // 0 marks rows where the exponent does not apply
    double param = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::string flag = "ok";  // ok | excluded | tail | error
};

namespace detail {

inline int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    int cap = hw > 0 ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("SMOOTHLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) cap = std::min(cap, v);
    }
    return cap;
}

// index-partitioned parallel loop; the partition depends only on count and
// the thread budget, and every index writes its own slot, so results do not
// depend on scheduling
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    std::size_t workers = std::min<std::size_t>(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t lo = count * w / workers, hi = count * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline EquivalenceRow make_row(std::string experiment, std::string function, double p,
                               double param, double lhs, double rhs) {
    EquivalenceRow row;
    row.experiment = std::move(experiment);
    row.function = std::move(function);
    row.p = p;
    row.param = param;
    row.lhs = lhs;
    row.rhs = rhs;
    if (rhs > 1e-14) {
        row.ratio = lhs / rhs;
    } else {
        row.ratio = 0.0;
        row.flag = "excluded";
    }
    return row;
}

inline LebesgueExponent exponent_of(double p) {
    return std::isinf(p) ? LebesgueExponent::infinity() : LebesgueExponent(p);
}

inline double p_key(const LebesgueExponent& p) {
    return p.is_infinity() ? std::numeric_limits<double>::infinity() : p.value();
}

// conjugate of the antiderivative: \hat{f}_k -> -\hat{f}_k / |k|, k != 0
inline Spectrum conjugate_antiderivative(const Spectrum& f) {
    return apply_symbol(f, [](std::span<const int> k) {
        return k[0] == 0 ? complex_t(0.0) : complex_t(-1.0 / std::abs(k[0]), 0.0);
    });
}

// ||f - Phi f||_p for the axis-sum means (1 - sum_j (eps |k_j|)^alpha)_+^beta
inline double axes_means_error(const Spectrum& f, double eps, double alpha, double beta,
                               const LebesgueExponent& p) {
    auto residual = apply_symbol(f, [&](std::span<const int> k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i)
            acc += std::pow(eps * std::abs(k[i]), alpha);
        double base = 1.0 - acc;
        double phi = base > 0.0 ? std::pow(base, beta) : 0.0;
        return complex_t(1.0 - phi, 0.0);
    });
    return lp_norm(synthesize(residual), p);
}

// exact K at p = 2, candidate-minimum upper bound otherwise; both sit inside
// constant factors of the true K once the bridging conditions hold
inline double k_proxy(const Spectrum& f, const OperatorSymbol& d, double eps_k,
                      const LebesgueExponent& p) {
    if (!p.is_infinity() && p.value() == 2.0) return k_exact_l2(f, d, eps_k).value;
    return k_upper_bound(f, d, eps_k, p);
}

inline void append_kernel_rows(std::vector<EquivalenceRow>& rows, const std::string& kind,
                               const std::string& function, const LebesgueExponent& p,
                               double param, double err, const WeightedModulusResult& wm,
                               double k_value) {
    auto a = make_row(kind + "/err_vs_mod", function, p_key(p), param, err, wm.value);
    if (a.flag == "ok" && wm.tail_bound > 1e-6 * std::max(wm.value, 1e-300))
        a.flag = "tail";
    rows.push_back(std::move(a));
    rows.push_back(make_row(kind + "/K_vs_err", function, p_key(p), param, k_value, err));
}

}  // namespace detail

// fills unset fields with per-kind defaults and validates the result
inline ExperimentConfig resolve_experiment_config(ExperimentConfig cfg) {
    static const std::vector<std::string> kinds = {
        "equiv_2_2", "equiv_2_3", "equiv_2_4", "equiv_3_4",    "equiv_3_5",  "equiv_3_6",
        "equiv_3_8", "equiv_3_9", "kfunc_lemma", "banach_suite", "wiener_scan"};
    if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
        throw std::invalid_argument("unknown experiment kind '" + cfg.kind + "'");

    const bool planar = cfg.kind.starts_with("equiv_3_");
    if (cfg.corpus.empty()) {
        if (cfg.kind == "wiener_scan")
            ;  // corpus-free
        else if (cfg.kind == "kfunc_lemma")
            cfg.corpus = {"random_trig(16,1)", "random_trig(16,2)", "random_trig(16,3)",
                          "gaussian_smooth"};
        else
            cfg.corpus = planar ? default_corpus_2d() : default_corpus_1d();
    }

    if (cfg.order == 0) {
        if (cfg.kind == "equiv_2_4")
            cfg.order = 2;
        else if (cfg.kind == "equiv_3_9")
            cfg.order = 2;
        else if (cfg.kind == "banach_suite" || cfg.kind == "equiv_2_2" ||
                 cfg.kind == "equiv_2_3")
            cfg.order = 2;
        else
            cfg.order = 1;
    }
    if (cfg.alpha == 0.0) cfg.alpha = cfg.kind == "equiv_2_4" ? 2.0 : 1.0;

    if (cfg.p_list.empty()) {
        if (cfg.kind == "kfunc_lemma")
            cfg.p_list = {2.0};
        else if (cfg.kind == "equiv_3_6")
            cfg.p_list = {std::numeric_limits<double>::infinity()};
        else if (cfg.kind == "wiener_scan")
            cfg.p_list = {};
        else
            cfg.p_list = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    }

    if (cfg.grid.empty()) {
        if (cfg.kind == "equiv_2_2") {
            for (double h = two_pi / 256.0; h <= 1.0 / (cfg.order + 1.0); h *= 2.0)
                cfg.grid.push_back(h);
        } else if (cfg.kind == "equiv_2_3") {
            cfg.grid = {8, 16, 32, 64, 128, 256};
        } else if (cfg.kind == "equiv_3_6") {
            cfg.grid = {4, 8, 16, 32};
        } else if (cfg.kind == "banach_suite") {
            cfg.grid = {0.05, 0.1, 0.2, 0.4};
        } else if (cfg.kind == "wiener_scan") {
            cfg.grid = {1, 2, 3, 4, 5, 6};
        } else if (cfg.kind == "kfunc_lemma") {
            for (double h = 1.0 / 128.0; h <= 0.26; h *= 2.0) cfg.grid.push_back(h);
        } else {
            for (int n : {8, 16, 32, 64, 128, 256}) cfg.grid.push_back(1.0 / n);
        }
    }
    for (double g : cfg.grid)
        if (!(g > 0.0)) throw std::invalid_argument("grid values must be positive");

    if (cfg.resolution == 0) cfg.resolution = planar ? 256 : 1024;
    if (cfg.resolution < 8 || (cfg.resolution & (cfg.resolution - 1)) != 0)
        throw std::invalid_argument("resolution must be a power of two, at least 8");

    if (cfg.kernel_q == 0.0) {
        if (cfg.kind == "equiv_2_4")
            cfg.kernel_q = cfg.order + cfg.alpha;  // the stated d = 1 exponent
        else if (cfg.kind == "equiv_3_8")
            cfg.kernel_q = 1.0 + cfg.alpha;
        else
            cfg.kernel_q = 0.0;  // radial kinds default to alpha + d at run time
    }
    if (cfg.method != "fejer" && cfg.method != "riesz")
        throw std::invalid_argument("method must be 'fejer' or 'riesz'");
    return cfg;
}

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

    static const std::vector<std::string> known = {
        "experiment", "corpus", "resolution", "p",      "grid",   "order", "alpha",
        "beta",       "kernel_q", "truncation_U", "method", "seed", "out"};
    for (auto& [key, value] : doc.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("unknown config key '" + key + "'");

    ExperimentConfig cfg;
    try {
        cfg.kind = doc.at("experiment").get<std::string>();
        if (doc.contains("corpus")) cfg.corpus = doc["corpus"].get<std::vector<std::string>>();
        if (doc.contains("resolution")) cfg.resolution = doc["resolution"].get<int>();
        if (doc.contains("p")) {
            for (const auto& entry : doc["p"]) {
                if (entry.is_string()) {
                    if (entry.get<std::string>() != "inf")
                        throw std::invalid_argument("p entries must be numbers or \"inf\"");
                    cfg.p_list.push_back(std::numeric_limits<double>::infinity());
                } else {
                    cfg.p_list.push_back(entry.get<double>());
                }
            }
        }
        if (doc.contains("grid")) cfg.grid = doc["grid"].get<std::vector<double>>();
        if (doc.contains("order")) cfg.order = doc["order"].get<int>();
        if (doc.contains("alpha")) cfg.alpha = doc["alpha"].get<double>();
        if (doc.contains("beta")) cfg.beta = doc["beta"].get<double>();
        if (doc.contains("kernel_q")) cfg.kernel_q = doc["kernel_q"].get<double>();
        if (doc.contains("truncation_U")) cfg.truncation_U = doc["truncation_U"].get<double>();
        if (doc.contains("method")) cfg.method = doc["method"].get<std::string>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config field has the wrong type: ") +
                                    e.what());
    }
    return resolve_experiment_config(std::move(cfg));
}

namespace detail {

struct SweepContext {
    const ExperimentConfig& cfg;
    const std::vector<Spectrum>& spectra;
};

inline std::vector<EquivalenceRow> sweep_pair_rows(const SweepContext& ctx,
                                                   std::size_t function_index,
                                                   double param) {
    const auto& cfg = ctx.cfg;
    const auto& f = ctx.spectra[function_index];
    const auto& id = cfg.corpus[function_index];
    const int r = cfg.order;
    std::vector<EquivalenceRow> rows;

    for (double pv : cfg.p_list) {
        auto p = exponent_of(pv);
        if (cfg.kind == "equiv_2_2") {
            double lhs = classical_modulus(f, r, StepSet::segment({1.0}), param, p);
            double rhs = linearized_modulus(f, r, param, p);
            rows.push_back(make_row(cfg.kind, id, pv, param, lhs, rhs));
        } else if (cfg.kind == "equiv_2_3") {
            int n = static_cast<int>(std::lround(param));
            auto m = r % 2 == 0 ? MultiplierDescriptor::modulus_even(r)
                                : MultiplierDescriptor::modulus_odd(r);
            double lhs = approximate(f, m, 1.0 / n, p).error;
            double rhs = classical_modulus(f, r, StepSet::segment({1.0}), 1.0 / n, p);
            rows.push_back(make_row(cfg.kind, id, pv, param, lhs, rhs));
        } else if (cfg.kind == "equiv_2_4") {
            int a = static_cast<int>(std::lround(cfg.alpha));
            auto wm = weighted_modulus(
                f, r, WeightSpec::kernel(cfg.kernel_q, cfg.truncation_U), param, p);
            double rhs;
            if (a % 2 == 0) {
                rhs = classical_modulus(f, a, StepSet::segment({1.0}), param, p);
            } else {
                rhs = classical_modulus(f, a + 1, StepSet::segment({1.0}), param, p) +
                      classical_modulus(conjugate_antiderivative(f), a + 1,
                                        StepSet::segment({1.0}), param, p) /
                          param;
            }
            auto row = make_row(cfg.kind, id, pv, param, wm.value, rhs);
            if (row.flag == "ok" && wm.tail_bound > 1e-6 * std::max(wm.value, 1e-300))
                row.flag = "tail";
            rows.push_back(std::move(row));
        } else if (cfg.kind == "equiv_3_4") {
            double err =
                approximate(f, MultiplierDescriptor::riesz_means(2.0 * r, cfg.beta),
                            param, p)
                    .error;
            auto wm = weighted_modulus(f, r, WeightSpec::ball(), param, p);
            double k = k_proxy(f, OperatorSymbol::laplacian_power(r),
                               std::pow(param, 2.0 * r), p);
            append_kernel_rows(rows, cfg.kind, id, p, param, err, wm, k);
        } else if (cfg.kind == "equiv_3_5") {
            double err = axes_means_error(f, param, 2.0 * r, cfg.beta, p);
            auto wm = weighted_modulus(f, r, WeightSpec::axes(), param, p);
            double k = k_proxy(f, OperatorSymbol::axis_power(2.0 * r),
                               std::pow(param, 2.0 * r), p);
            append_kernel_rows(rows, cfg.kind, id, p, param, err, wm, k);
        } else if (cfg.kind == "equiv_3_6") {
            int n = static_cast<int>(std::lround(param));
            double err =
                approximate(f, MultiplierDescriptor::marcinkiewicz_2d(n), 1.0, p).error;
            auto wm = weighted_modulus(
                f, 1,
                WeightSpec::kernel_along(2.0, cfg.truncation_U, {{1.0, 1.0}, {1.0, -1.0}}),
                1.0 / n, p);
            auto d_max = OperatorSymbol::custom([](std::span<const int> k) {
                return complex_t(std::max(std::abs(k[0]), std::abs(k[1])), 0.0);
            });
            double k = k_proxy(f, d_max, 1.0 / n, p);
            append_kernel_rows(rows, cfg.kind, id, p, param, err, wm, k);
        } else if (cfg.kind == "equiv_3_8") {
            double err = axes_means_error(f, param, cfg.alpha, cfg.beta, p);
            auto wm = weighted_modulus(
                f, r,
                WeightSpec::kernel_along(cfg.kernel_q, cfg.truncation_U,
                                         {{1.0, 0.0}, {0.0, 1.0}}),
                param, p);
            double k = k_proxy(f, OperatorSymbol::axis_power(cfg.alpha),
                               std::pow(param, cfg.alpha), p);
            append_kernel_rows(rows, cfg.kind, id, p, param, err, wm, k);
        } else if (cfg.kind == "equiv_3_9") {
            double err =
                approximate(f, MultiplierDescriptor::riesz_means(cfg.alpha, cfg.beta),
                            param, p)
                    .error;
            double q = cfg.kernel_q > 0.0 ? cfg.kernel_q : cfg.alpha + f.dim();
            auto wm =
                weighted_modulus(f, r, WeightSpec::kernel(q, cfg.truncation_U), param, p);
            double k = k_proxy(f, OperatorSymbol::radial_power(cfg.alpha),
                               std::pow(param, cfg.alpha), p);
            append_kernel_rows(rows, cfg.kind, id, p, param, err, wm, k);
        } else if (cfg.kind == "banach_suite") {
            const double h = param;
            const auto seg = StepSet::segment({1.0});
            double w_h = classical_modulus(f, r, seg, h, p);
            double w_2h = classical_modulus(f, r, seg, 2.0 * h, p);
            rows.push_back(make_row(cfg.kind + "/scaling", id, pv, param, w_2h,
                                    std::pow(2.0, r) * w_h));

            int steps = 0;
            while (std::pow(2.0, steps + 1) * h <= pi && steps < 8) ++steps;
            double rhs = 0.0;
            for (int v = 0; v <= steps; ++v)
                rhs += r / 2.0 * std::pow(2.0, -v * r) *
                       classical_modulus(f, r + 1, seg, std::pow(2.0, v) * h, p);
            rhs += std::pow(2.0, -(steps + 1.0) * r) *
                   classical_modulus(f, r, seg, std::pow(2.0, steps + 1.0) * h, p);
            rows.push_back(make_row(cfg.kind + "/marchaud", id, pv, param, w_h, rhs));

            auto rep = steklov_report(f, r, h, p);
            rows.push_back(make_row(cfg.kind + "/steklov_approx", id, pv, param,
                                    rep.approx_error, rep.modulus_rh));
            rows.push_back(make_row(cfg.kind + "/steklov_seminorm", id, pv, param,
                                    rep.seminorm, rep.seminorm_bound));
        }
    }
    return rows;
}

inline std::vector<EquivalenceRow> wiener_scan_rows(double param) {
    std::vector<EquivalenceRow> rows;
    int r = static_cast<int>(std::lround(param));

    auto scan = psi_r_scan(r, 100.0);
    auto min_row = make_row("wiener_scan/psi_min", "psi_" + std::to_string(r), 0.0, param,
                            scan.minimum, 1.0);
    if (min_row.flag == "ok" && !(scan.minimum > 0.0)) min_row.flag = "error";
    rows.push_back(std::move(min_row));

    for (double theta : {0.25, 0.5, 1.0}) {
        auto g = TransitionFunction::from_profiles(
            [=](double x) { return forward_difference_symbol(theta * x, r); },
            [=](double x) { return psi_linearized(x, static_cast<double>(r)); });
        double lhs = std::abs(transition_eval(g, 0.0));
        double rhs = (r + 1.0) * std::pow(theta, r);
        rows.push_back(make_row("wiener_scan/transition_zero",
                                "g_" + std::to_string(r), 0.0, theta, lhs, rhs));
    }

    if (r <= 2) {
        for (int a : {1, 2}) {
            if (!(a < 2 * r)) continue;
            rows.push_back(make_row(
                "wiener_scan/tail_limit",
                "sin_tail_r" + std::to_string(r) + "_a" + std::to_string(a), 0.0, param,
                sin_tail_profile(1000.0, r, a), sin_tail_limit(r, a)));
        }
    }
    return rows;
}

}  // namespace detail

inline std::vector<EquivalenceRow> run_experiment(const ExperimentConfig& raw) {
    auto cfg = resolve_experiment_config(raw);

    std::vector<EquivalenceRow> rows;
    if (cfg.kind == "wiener_scan") {
        std::vector<std::vector<EquivalenceRow>> slots(cfg.grid.size());
        detail::parallel_for(cfg.grid.size(), [&](std::size_t i) {
            slots[i] = detail::wiener_scan_rows(cfg.grid[i]);
        });
        for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
        auto fejer_hat = [](double x) {
            double a = 1.0 - std::abs(x);
            return complex_t(a > 0.0 ? a : 0.0, 0.0);
        };
        auto est = a_norm_estimate_1d(fejer_hat, 32.0);
        auto row = detail::make_row("wiener_scan/a_norm_fejer", "fejer_hat", 0.0, 32.0,
                                    est.value, 1.0);
        if (row.flag == "ok" && !(est.converged && est.decay_ok)) row.flag = "error";
        rows.push_back(std::move(row));
    } else if (cfg.kind == "kfunc_lemma") {
        std::vector<Spectrum> spectra;
        for (const auto& id : cfg.corpus) {
            spectra.push_back(corpus_spectrum(id, cfg.resolution));
            if (spectra.back().dim() != 1)
                throw std::invalid_argument("kfunc_lemma needs one-dimensional functions");
        }
        const bool fejer = cfg.method == "fejer";
        auto m = fejer ? MultiplierDescriptor::fejer()
                       : MultiplierDescriptor::riesz_means(2.0, 1.0);
        auto d = fejer ? OperatorSymbol::derivative(1.0) : OperatorSymbol::radial_power(2.0);
        double homogeneity = fejer ? 1.0 : 2.0;
        for (double pv : cfg.p_list) {
            auto report = lemma_condition_report(spectra, m, d, cfg.grid,
                                                 detail::exponent_of(pv), homogeneity);
            for (const auto& lr : report.rows)
                rows.push_back(detail::make_row("kfunc_lemma/K_vs_err",
                                                cfg.corpus[lr.function_id], pv, lr.step,
                                                lr.k_value, lr.error));
            rows.push_back(detail::make_row("kfunc_lemma/a_alpha", "(max over corpus)", pv,
                                            0.0, report.a_alpha, 1.0));
            rows.push_back(detail::make_row("kfunc_lemma/a_beta", "(max over corpus)", pv,
                                            0.0, report.a_beta, 1.0));
            rows.push_back(detail::make_row("kfunc_lemma/a_gamma", "(max over corpus)", pv,
                                            0.0, report.a_gamma, 1.0));
        }
    } else {
        if (cfg.corpus.empty()) throw std::invalid_argument("corpus must not be empty");
        const bool planar = cfg.kind.starts_with("equiv_3_");
        std::vector<Spectrum> spectra;
        for (const auto& id : cfg.corpus) {
            spectra.push_back(corpus_spectrum(id, cfg.resolution));
            int want = cfg.kind == "equiv_3_9" ? spectra.back().dim() : (planar ? 2 : 1);
            if (spectra.back().dim() != want)
                throw std::invalid_argument("corpus function '" + id +
                                            "' has the wrong dimension for " + cfg.kind);
        }
        detail::SweepContext ctx{cfg, spectra};
        std::size_t tasks = cfg.corpus.size() * cfg.grid.size();
        std::vector<std::vector<EquivalenceRow>> slots(tasks);
        detail::parallel_for(tasks, [&](std::size_t t) {
            std::size_t fi = t / cfg.grid.size(), gi = t % cfg.grid.size();
            try {
                slots[t] = detail::sweep_pair_rows(ctx, fi, cfg.grid[gi]);
            } catch (const std::exception&) {
                EquivalenceRow row;
                row.experiment = cfg.kind;
                row.function = cfg.corpus[fi];
                row.param = cfg.grid[gi];
                row.flag = "error";
                slots[t] = {std::move(row)};
            }
        });
        for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const EquivalenceRow& a, const EquivalenceRow& b) {
                         if (a.experiment != b.experiment) return a.experiment < b.experiment;
                         if (a.function != b.function) return a.function < b.function;
                         if (a.p != b.p) return a.p < b.p;
                         return a.param < b.param;
                     });
    return rows;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_p(double p) {
    if (p == 0.0) return "-";
    if (std::isinf(p)) return "inf";
    return format_double(p);
}

}  // namespace detail

inline std::string rows_to_csv(const std::vector<EquivalenceRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("no rows to report");
    std::string out = "experiment,function,p,param,lhs,rhs,ratio,flag\n";
    for (const auto& r : rows) {
        out += r.experiment;
        out += ',';
        out += r.function;
        out += ',';
        out += detail::format_p(r.p);
        out += ',';
        out += detail::format_double(r.param);
        out += ',';
        out += detail::format_double(r.lhs);
        out += ',';
        out += detail::format_double(r.rhs);
        out += ',';
        out += detail::format_double(r.ratio);
        out += ',';
        out += r.flag;
        out += '\n';
    }
    return out;
}

// one log-log series per (experiment, function, p, side); rows with
// nonpositive values are skipped since they have no logarithm
inline std::string rows_to_plotdata(const std::vector<EquivalenceRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("no rows to report");
    std::string out;
    auto emit_series = [&](const char* side, auto&& value_of) {
        std::string open_key;
        for (const auto& r : rows) {
            double v = value_of(r);
            if (!(r.param > 0.0) || !(v > 0.0)) continue;
            std::string key = r.experiment + " " + r.function + " p=" +
                              detail::format_p(r.p) + " " + side;
            if (key != open_key) {
                if (!out.empty()) out += '\n';
                out += "# " + key + "\n";
                open_key = key;
            }
            out += detail::format_double(std::log10(r.param));
            out += ' ';
            out += detail::format_double(std::log10(v));
            out += '\n';
        }
    };
    emit_series("lhs", [](const EquivalenceRow& r) { return r.lhs; });
    emit_series("rhs", [](const EquivalenceRow& r) { return r.rhs; });
    return out;
}

// parse a CSV produced by rows_to_csv back into rows (used by `report`)
inline std::vector<EquivalenceRow> rows_from_csv(const std::string& text) {
    std::vector<EquivalenceRow> rows;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (header) {
            if (line != "experiment,function,p,param,lhs,rhs,ratio,flag")
                throw std::invalid_argument("unrecognized CSV header");
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::size_t cell = 0;
        while (cells.size() < 7) {
            std::size_t comma = line.find(',', cell);
            if (comma == std::string::npos)
                throw std::invalid_argument("malformed CSV row: " + line);
            cells.push_back(line.substr(cell, comma - cell));
            cell = comma + 1;
        }
        cells.push_back(line.substr(cell));
        EquivalenceRow r;
        r.experiment = cells[0];
        r.function = cells[1];
        r.p = cells[2] == "-" ? 0.0
            : cells[2] == "inf" ? std::numeric_limits<double>::infinity()
                                : std::stod(cells[2]);
        r.param = std::stod(cells[3]);
        r.lhs = std::stod(cells[4]);
        r.rhs = std::stod(cells[5]);
        r.ratio = std::stod(cells[6]);
        r.flag = cells[7];
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw std::invalid_argument("CSV contained no rows");
    return rows;
}

// least-squares slope of log10(value) against log10(param) for one series
inline double loglog_slope(const std::vector<EquivalenceRow>& rows,
                           const std::string& experiment, const std::string& function,
                           double p, bool lhs_side) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& r : rows) {
        if (r.experiment != experiment || r.function != function || r.p != p) continue;
        double v = lhs_side ? r.lhs : r.rhs;
        if (!(r.param > 0.0) || !(v > 0.0)) continue;
        double x = std::log10(r.param), y = std::log10(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) throw std::invalid_argument("need at least two points for a slope");
    double denom = count * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw std::invalid_argument("degenerate slope fit");
    return (count * sxy - sx * sy) / denom;
}

}  // namespace smoothlab
