// duonet: generate data, train, evaluate and verify dual-branch networks.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data or format error,
// 3 numeric failure (divergence, gradcheck or equivcheck overrun).

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "duonet/commands.hpp"
#include "duonet/error.hpp"

namespace {

using namespace duonet;

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kNumeric = 3;

struct Options {
    std::string config;
    std::string out;
    std::string data;
    std::string checkpoint;
    std::string segment;
    std::optional<std::uint64_t> seed;
    std::vector<std::size_t> sizes;
    double step = 1e-6;
    bool quiet = false;
};

std::optional<std::filesystem::path> optional_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
}

std::optional<Segment> optional_segment(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_segment(s);
}

TrainConfig config_or_throw(const Options& o) {
    if (o.config.empty()) throw ConfigError("--config is required");
    return load_config(o.config);
}

int run_generate(const Options& o) {
    TrainConfig cfg = config_or_throw(o);
    if (o.seed) cfg.data.seed = *o.seed;
    if (o.out.empty()) throw ConfigError("--out is required");
    const StaticSystem sys = cmd_generate(cfg, o.out);
    std::cout << "samples=" << sys.record.length() << "\nout=" << o.out << '\n';
    return 0;
}

int run_train(const Options& o) {
    TrainConfig cfg = config_or_throw(o);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out.empty()) throw ConfigError("--out is required");
    cmd_train(cfg, o.out, optional_path(o.data), std::cout, o.quiet ? nullptr : &std::cerr);
    return 0;
}

int run_evaluate(const Options& o) {
    if (o.checkpoint.empty()) throw ConfigError("--checkpoint is required");
    cmd_evaluate(o.checkpoint, optional_path(o.data), optional_segment(o.segment), std::cout);
    return 0;
}

int run_predict(const Options& o) {
    if (o.checkpoint.empty()) throw ConfigError("--checkpoint is required");
    if (o.out.empty()) throw ConfigError("--out is required");
    const Simulation sim = cmd_predict(o.checkpoint, optional_path(o.data), optional_segment(o.segment), o.out);
    std::cout << "rows=" << sim.indices.size() << "\nout=" << o.out << '\n';
    return 0;
}

int run_gradcheck(const Options& o) {
    std::vector<BlockSpec> model = default_gradcheck_model();
    std::uint64_t seed = 0;
    if (!o.config.empty()) {
        const TrainConfig cfg = load_config(o.config);
        model = cfg.model;
        seed = cfg.seed;
    }
    if (o.seed) seed = *o.seed;
    const GradCheckReport report = cmd_gradcheck(model, seed, std::cout, 4, o.step);
    return report.max_rel_error < kGradcheckTolerance ? 0 : kNumeric;
}

int run_equivcheck(const Options& o) {
    std::vector<std::size_t> sizes = o.sizes;
    if (sizes.empty()) sizes = {2, 4, 8, 16};
    const auto deviations = cmd_equivcheck(sizes, o.seed.value_or(0), std::cout);
    for (double d : deviations) {
        if (!(d < kEquivalenceTolerance)) return kNumeric;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-branch time/transform-domain networks for system identification"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("generate", "Write the synthetic static system to CSV");
    gen->add_option("--config", o.config, "Run configuration (INI)")->required();
    gen->add_option("--out", o.out, "CSV output path; parameters go to <out>.params")->required();
    gen->add_option("--seed", o.seed, "Override the data seed");

    auto* tr = app.add_subcommand("train", "Train a model and write a checkpoint");
    tr->add_option("--config", o.config, "Run configuration (INI)")->required();
    tr->add_option("--out", o.out, "Checkpoint output path")->required();
    tr->add_option("--seed", o.seed, "Override the model/shuffle seed");
    tr->add_option("--data", o.data, "Train on this CSV instead of the configured source");
    tr->add_flag("--quiet", o.quiet, "Suppress per-epoch progress on stderr");

    auto* ev = app.add_subcommand("evaluate", "Score a checkpoint in free-run simulation");
    ev->add_option("--checkpoint", o.checkpoint, "Checkpoint path")->required();
    ev->add_option("--data", o.data, "CSV to score (default: the checkpoint's own data)");
    ev->add_option("--segment", o.segment, "all|train|validation|test (default: test, or all for --data)")
        ->check(CLI::IsMember({"all", "train", "validation", "test"}));

    auto* pr = app.add_subcommand("predict", "Write t,y,yhat,err for a checkpoint");
    pr->add_option("--checkpoint", o.checkpoint, "Checkpoint path")->required();
    pr->add_option("--data", o.data, "CSV to predict (default: the checkpoint's own data)");
    pr->add_option("--out", o.out, "Prediction CSV path")->required();
    pr->add_option("--segment", o.segment, "all|train|validation|test (default: test, or all for --data)")
        ->check(CLI::IsMember({"all", "train", "validation", "test"}));

    auto* gc = app.add_subcommand("gradcheck", "Compare backprop against central differences");
    gc->add_option("--config", o.config, "Use this config's model and seed");
    gc->add_option("--seed", o.seed, "Override the seed");
    gc->add_option("--step", o.step, "Central-difference step, 1e-8..1e-3 (default: 1e-6)");

    auto* eq = app.add_subcommand("equivcheck", "Check the dense equivalent of a DFT branch");
    eq->add_option("sizes", o.sizes, "Transform sizes (default: 2 4 8 16)")->check(CLI::PositiveNumber);
    eq->add_option("--seed", o.seed, "Seed for random weights and inputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    const auto fail = [&](const std::exception& e, int code) {
        std::cerr << "error: ";
        if (!o.config.empty()) std::cerr << o.config << ": ";
        std::cerr << e.what() << '\n';
        return code;
    };
    try {
        if (*gen) return run_generate(o);
        if (*tr) return run_train(o);
        if (*ev) return run_evaluate(o);
        if (*pr) return run_predict(o);
        if (*gc) return run_gradcheck(o);
        if (*eq) return run_equivcheck(o);
    } catch (const ConfigError& e) {
        return fail(e, kUsage);
    } catch (const NumericError& e) {
        return fail(e, kNumeric);
    } catch (const Error& e) {
        return fail(e, kData);
    } catch (const std::exception& e) {
        return fail(e, kData);
    }
    return kUsage;
}
