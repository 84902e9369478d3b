#include "duonet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "duonet/checkpoint.hpp"
#include "duonet/rng.hpp"
#include "duonet/theory.hpp"

namespace duonet {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string percent(double fraction) { return format_double(100.0 * fraction); }

// The record behind a checkpoint: an explicit CSV, or whatever its config echo names.
SignalRecord checkpoint_record(const Checkpoint& ckpt, const std::optional<std::filesystem::path>& data,
                               std::optional<Segment> segment) {
    const TrainConfig cfg = parse_config(ckpt.config_echo);
    if (data) {
        SignalRecord rec = load_csv(*data, cfg.data.dt);
        return segment ? select_segment(cfg, rec, *segment) : rec;
    }
    return select_segment(cfg, load_source(cfg), segment.value_or(Segment::test));
}

}  // namespace

SignalRecord load_source(const TrainConfig& cfg, const std::optional<std::filesystem::path>& data_override) {
    if (data_override) return load_csv(*data_override, cfg.data.dt);
    if (cfg.data.source == "csv") {
        if (cfg.data.path.empty()) throw ConfigError("data source is csv but no path is set");
        return load_csv(cfg.data.path, cfg.data.dt);
    }
    return generate_static_system(cfg.data.seed, cfg.data.num_samples, cfg.data.dt).record;
}

Segment parse_segment(std::string_view name) {
    if (name == "all") return Segment::all;
    if (name == "train") return Segment::train;
    if (name == "validation") return Segment::validation;
    if (name == "test") return Segment::test;
    throw ConfigError("unknown segment '" + std::string(name) + "'");
}

SignalRecord select_segment(const TrainConfig& cfg, const SignalRecord& rec, Segment seg) {
    if (seg == Segment::all) return rec;
    SplitRecords parts = split_record(rec, cfg.data.train_fraction, cfg.data.validation_fraction);
    switch (seg) {
        case Segment::train: return std::move(parts.train);
        case Segment::validation: return std::move(parts.validation);
        default: return std::move(parts.test);
    }
}

ExperimentResult run_experiment(const TrainConfig& cfg, const SignalRecord& rec, std::ostream* progress) {
    cfg.validate();
    const SplitRecords parts = split_record(rec, cfg.data.train_fraction, cfg.data.validation_fraction);
    const WindowedDataset train_set = build_windows(parts.train, cfg.window.m, cfg.window.n, cfg.window.stride);
    const WindowedDataset validation_set = build_windows(parts.validation, cfg.window.m, cfg.window.n, cfg.window.n);

    TrainOptions options = cfg.train_options();
    options.progress = progress;
    TrainResult trained = train(Network::initialized(cfg.model, cfg.seed), train_set, options, &validation_set);
    Simulation test = simulate(trained.network, parts.test);
    return ExperimentResult{std::move(trained), std::move(test)};
}

StaticSystem cmd_generate(const TrainConfig& cfg, const std::filesystem::path& out) {
    if (cfg.data.source != "synthetic") throw ConfigError("generate needs a synthetic data source");
    if (cfg.data.num_samples == 0) throw ConfigError("num_samples must be >= 1");
    if (!(cfg.data.dt > 0.0)) throw ConfigError("dt must be positive");
    StaticSystem sys = generate_static_system(cfg.data.seed, cfg.data.num_samples, cfg.data.dt);
    save_csv(sys.record, out);

    std::filesystem::path sidecar = out;
    sidecar += ".params";
    std::ofstream side = open_output(sidecar);
    side << "seed=" << cfg.data.seed << '\n'
         << "num_samples=" << cfg.data.num_samples << '\n'
         << "dt=" << format_double(cfg.data.dt) << '\n';
    for (std::size_t i = 0; i < sys.params.alpha.size(); ++i) {
        side << "alpha" << i + 1 << '=' << format_double(sys.params.alpha[i]) << '\n';
    }
    side << "beta1=" << format_double(sys.params.beta1) << '\n' << "beta2=" << format_double(sys.params.beta2) << '\n';
    finish_output(side, sidecar);
    return sys;
}

ExperimentResult cmd_train(const TrainConfig& cfg, const std::filesystem::path& checkpoint,
                           const std::optional<std::filesystem::path>& data_override, std::ostream& out,
                           std::ostream* log) {
    TrainConfig effective = cfg;
    if (data_override) {
        effective.data.source = "csv";
        effective.data.path = data_override->string();
    }
    effective.validate();
    const SignalRecord rec = load_source(effective);
    ExperimentResult result = run_experiment(effective, rec, log);

    save_checkpoint(Checkpoint{result.trained.network, print_config(effective), effective.seed}, checkpoint);

    const TrainReport& r = result.trained.report;
    out << "parameters=" << result.trained.network.parameter_count() << '\n'
        << "epochs=" << r.epoch_losses.size() << '\n';
    if (!r.epoch_losses.empty()) out << "final_loss=" << format_double(r.epoch_losses.back()) << '\n';
    if (r.validation_rmse) out << "validation_rmse=" << format_double(*r.validation_rmse) << '\n';
    if (r.validation_nrmse) out << "validation_nrmse_pct=" << percent(*r.validation_nrmse) << '\n';
    out << "test_rmse=" << format_double(result.test.metrics.rmse) << '\n'
        << "test_nrmse_pct=" << percent(result.test.metrics.nrmse) << '\n'
        << "test_n=" << result.test.metrics.n_points << '\n'
        << "seed=" << r.seed << '\n'
        << "checkpoint=" << checkpoint.string() << '\n';
    if (log) *log << "seconds=" << format_double(r.seconds) << '\n';
    return result;
}

EvalResult cmd_evaluate(const std::filesystem::path& checkpoint, const std::optional<std::filesystem::path>& data,
                        std::optional<Segment> segment, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(checkpoint);
    const SignalRecord rec = checkpoint_record(ckpt, data, segment);
    const Simulation sim = simulate(ckpt.network, rec);
    out << "rmse=" << format_double(sim.metrics.rmse) << " nrmse_pct=" << percent(sim.metrics.nrmse)
        << " n=" << sim.metrics.n_points << '\n';
    return sim.metrics;
}

Simulation cmd_predict(const std::filesystem::path& checkpoint, const std::optional<std::filesystem::path>& data,
                       std::optional<Segment> segment, const std::filesystem::path& out) {
    const Checkpoint ckpt = load_checkpoint(checkpoint);
    const SignalRecord rec = checkpoint_record(ckpt, data, segment);
    Simulation sim = simulate(ckpt.network, rec);

    std::ofstream csv = open_output(out);
    const std::size_t channels = sim.y.cols();
    csv << (channels == 1 ? "t,y,yhat,err\n" : "t,y,yhat,err,channel\n");
    for (std::size_t r = 0; r < sim.indices.size(); ++r) {
        for (std::size_t c = 0; c < channels; ++c) {
            const double y = sim.y(r, c);
            const double yhat = sim.yhat(r, c);
            csv << sim.indices[r] << ',' << format_double(y) << ',' << format_double(yhat) << ','
                << format_double(y - yhat);
            if (channels > 1) csv << ',' << c;
            csv << '\n';
        }
    }
    finish_output(csv, out);
    return sim;
}

std::vector<BlockSpec> default_gradcheck_model() {
    BlockSpec hidden;
    hidden.shape = BlockShape{8, 8, 1, 1};
    hidden.transform = TransformKind::rfft;
    hidden.activation = Activation::gelu;
    BlockSpec head;
    head.shape = BlockShape{8, 4, 1, 1};
    head.transform = TransformKind::rfft;
    head.activation = Activation::identity;
    return {hidden, head};
}

GradCheckReport cmd_gradcheck(const std::vector<BlockSpec>& model, std::uint64_t seed, std::ostream& out,
                              std::size_t batch_size, double step) {
    const Network net = Network::initialized(model, seed);
    CounterRng rng(seed, streams::gradcheck);
    std::vector<Window> batch;
    for (std::size_t k = 0; k < batch_size; ++k) {
        Window w{RealMatrix(net.input_rows(), net.input_cols()), RealMatrix(net.output_rows(), net.output_cols()), 0};
        for (double& v : w.input.data()) v = rng.uniform(-1.0, 1.0);
        for (double& v : w.target.data()) v = rng.uniform(-1.0, 1.0);
        batch.push_back(std::move(w));
    }
    const GradCheckReport report = finite_diff_check(net, batch, step);

    out << "step=" << format_double(report.step) << '\n' << "parameters=" << report.parameters_checked << '\n';
    for (const GroupCheck& g : report.groups) {
        out << "block" << g.block << '.' << g.group << ".max_rel_error=" << format_double(g.max_rel_error)
            << " worst_index=" << g.worst_index << '\n';
    }
    out << "max_rel_error=" << format_double(report.max_rel_error) << '\n';
    if (!report.groups.empty()) {
        const GroupCheck& w = report.groups[report.worst_group];
        out << "worst=block" << w.block << '.' << w.group << '[' << w.worst_index << "]\n";
    }
    return report;
}

std::vector<double> cmd_equivcheck(const std::vector<std::size_t>& sizes, std::uint64_t seed, std::ostream& out,
                                   std::size_t trials) {
    std::vector<double> deviations;
    for (const std::size_t n : sizes) {
        if (n == 0) throw ConfigError("equivcheck sizes must be >= 1");
        CounterRng rng(seed ^ n, streams::gradcheck);
        const OrthogonalTransform t = OrthogonalTransform::make(TransformKind::dft, n);
        ComplexMatrix w_t(n, n);
        for (Complex& v : w_t.data()) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        ComplexVector b_t(n);
        for (Complex& v : b_t) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const DenseEquivalent dense = dense_equivalent(t, w_t, b_t);

        double worst = 0.0;
        RealVector x(n);
        for (std::size_t trial = 0; trial < trials; ++trial) {
            for (double& v : x) v = rng.uniform(-1.0, 1.0);
            const ComplexVector branch = branch_linear(t, w_t, b_t, x);
            const ComplexVector direct = dense_linear(dense, x);
            for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(branch[j] - direct[j]));
        }
        out << "n=" << n << " max_deviation=" << format_double(worst) << '\n';
        deviations.push_back(worst);
    }
    return deviations;
}

}  // namespace duonet
