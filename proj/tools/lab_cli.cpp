// Command-line front end for the equivalence sweeps.
//
//   smoothlab corpus list
//   smoothlab run <config.json> [--seed S] [--resolution N] [--out PATH]
//   smoothlab report <rows.csv> [--format csv|plotdata] [--out PATH]
//
// Exit codes: 0 on success, 2 on configuration or input errors, 3 when a
// sweep finished but some rows carry the "error" flag. SMOOTHLAB_THREADS
// caps the worker count.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "smoothlab/experiments.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for smoothness equivalences on the torus"};
    app.require_subcommand(1);

    auto* corpus_cmd = app.add_subcommand("corpus", "corpus catalog operations");
    auto* corpus_list = corpus_cmd->add_subcommand("list", "print the accepted name templates");
    corpus_cmd->require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    int resolution_override = 0;
    std::string out_override;
    auto* run_cmd = app.add_subcommand("run", "run an experiment described by a JSON config");
    run_cmd->add_option("config", config_path, "path to the JSON config")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed_override, "override the config seed");
    auto* res_opt =
        run_cmd->add_option("--resolution", resolution_override, "override the grid size");
    run_cmd->add_option("--out", out_override, "write the CSV here instead of stdout");

    std::string rows_path, format = "csv", report_out;
    auto* report_cmd = app.add_subcommand("report", "reformat a rows CSV");
    report_cmd->add_option("rows", rows_path, "path to a rows CSV")->required();
    report_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "plotdata"}));
    report_cmd->add_option("--out", report_out, "write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (corpus_list->parsed()) {
            for (const auto& name : smoothlab::corpus_catalog()) std::cout << name << '\n';
            return 0;
        }

        if (run_cmd->parsed()) {
            auto cfg = smoothlab::parse_experiment_config(read_file(config_path));
            if (seed_opt->count() > 0) cfg.seed = seed_override;
            if (res_opt->count() > 0) cfg.resolution = resolution_override;
            if (!out_override.empty()) cfg.out = out_override;

            auto rows = smoothlab::run_experiment(cfg);
            write_output(smoothlab::rows_to_csv(rows), cfg.out);

            for (const auto& row : rows) {
                if (row.flag == "error") {
                    std::cerr << "some rows failed numerically; see the flag column\n";
                    return 3;
                }
            }
            return 0;
        }

        if (report_cmd->parsed()) {
            auto rows = smoothlab::rows_from_csv(read_file(rows_path));
            auto text = format == "csv" ? smoothlab::rows_to_csv(rows)
                                        : smoothlab::rows_to_plotdata(rows);
            write_output(text, report_out);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
