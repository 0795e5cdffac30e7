#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "emscr/cli.hpp"
#include "emscr/errors.hpp"

namespace {

std::pair<std::uint32_t, std::uint32_t> parse_fail_pair(const std::string& text) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw emscr::UsageError("--fail expects two node ids: i1,i2");
    auto one = [&](const std::string& part) -> std::uint32_t {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(part, &used, 10);
            if (used != part.size() || v == 0 || v > 0xffffffffULL)
                throw std::invalid_argument(part);
            return static_cast<std::uint32_t>(v);
        } catch (const std::exception&) {
            throw emscr::UsageError("--fail expects two node ids: i1,i2");
        }
    };
    return {one(text.substr(0, comma)), one(text.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-node cooperative repair simulator"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::string config_path;
    std::string fail_spec;
    std::uint64_t seed = 0;
    std::uint64_t groups = 0;

    auto* gen = app.add_subcommand("gen-params", "write params.bin from a config file");
    gen->add_option("--config", config_path, "experiment config file")->required();
    gen->add_option("--out", out_dir, "experiment directory");
    auto* gen_seed = gen->add_option("--seed", seed, "override the config seed");
    auto* gen_groups = gen->add_option("--groups", groups, "override the group budget");
    auto* gen_fail = gen->add_option("--fail", fail_spec, "override the failed pair i1,i2");

    auto* enc = app.add_subcommand("encode", "write one shard file per node");
    enc->add_option("--out", out_dir, "experiment directory");

    auto* fail = app.add_subcommand("fail", "mark two nodes as failed");
    fail->add_option("--fail", fail_spec, "the two node ids i1,i2")->required();
    fail->add_option("--out", out_dir, "experiment directory");

    auto* repair = app.add_subcommand("repair", "rebuild the failed pair from survivors");
    repair->add_option("--out", out_dir, "experiment directory");

    auto* report = app.add_subcommand("report", "write report.txt from the transcript");
    report->add_option("--out", out_dir, "experiment directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            emscr::ExperimentConfig cfg = emscr::load_config(config_path);
            if (*gen_seed) cfg.seed = seed;
            if (*gen_groups) cfg.groups = groups;
            if (*gen_fail) {
                const auto [a, b] = parse_fail_pair(fail_spec);
                cfg.fail1 = a;
                cfg.fail2 = b;
            }
            emscr::cmd_gen_params(cfg, out_dir);
        } else if (enc->parsed()) {
            emscr::cmd_encode(out_dir);
        } else if (fail->parsed()) {
            const auto [a, b] = parse_fail_pair(fail_spec);
            emscr::cmd_fail(out_dir, a, b);
        } else if (repair->parsed()) {
            emscr::cmd_repair(out_dir);
        } else if (report->parsed()) {
            emscr::cmd_report(out_dir, std::cout);
        }
    } catch (const emscr::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
