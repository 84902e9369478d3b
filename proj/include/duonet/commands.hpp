#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "duonet/autograd.hpp"
#include "duonet/config.hpp"
#include "duonet/data.hpp"
#include "duonet/eval.hpp"
#include "duonet/optim.hpp"

namespace duonet {

/// The record a config points at: the synthetic static system or a CSV file.
/// data_override replaces the configured source with a CSV path.
SignalRecord load_source(const TrainConfig& cfg, const std::optional<std::filesystem::path>& data_override = {});

enum class Segment { all, train, validation, test };
Segment parse_segment(std::string_view name);
SignalRecord select_segment(const TrainConfig& cfg, const SignalRecord& rec, Segment seg);

struct ExperimentResult {
    TrainResult trained;
    Simulation test;
};

/// Split, window, train and score the test segment in free-run simulation.
ExperimentResult run_experiment(const TrainConfig& cfg, const SignalRecord& rec, std::ostream* progress = nullptr);

/// Writes the CSV and a "<out>.params" sidecar with the drawn parameters.
StaticSystem cmd_generate(const TrainConfig& cfg, const std::filesystem::path& out);

/// Trains and writes a checkpoint that echoes the effective config. The summary on out
/// is deterministic; per-epoch progress and wall time go to log.
ExperimentResult cmd_train(const TrainConfig& cfg, const std::filesystem::path& checkpoint,
                           const std::optional<std::filesystem::path>& data_override, std::ostream& out,
                           std::ostream* log = nullptr);

/// Without a data path the echoed config regenerates or reloads the training record.
/// A CSV given explicitly is scored whole unless a segment is requested.
EvalResult cmd_evaluate(const std::filesystem::path& checkpoint, const std::optional<std::filesystem::path>& data,
                        std::optional<Segment> segment, std::ostream& out);

/// Writes "t,y,yhat,err" rows; t is the record row index. Multi-output records get
/// one row per (index, channel) with the channel appended as a fifth column.
Simulation cmd_predict(const std::filesystem::path& checkpoint, const std::optional<std::filesystem::path>& data,
                       std::optional<Segment> segment, const std::filesystem::path& out);

/// Default gradcheck model: 8x1 -> 8x1 gelu rfft block, then 8x1 -> 4x1 identity block.
std::vector<BlockSpec> default_gradcheck_model();

/// Finite-difference check on a random batch. Returns the report; exit status is the
/// caller's decision.
GradCheckReport cmd_gradcheck(const std::vector<BlockSpec>& model, std::uint64_t seed, std::ostream& out,
                              std::size_t batch_size = 4, double step = 1e-6);

/// Largest |dense - branch| over 100 random inputs per size, DFT branch with random
/// complex weights. One "n=<N> max_deviation=<f64>" line per size.
std::vector<double> cmd_equivcheck(const std::vector<std::size_t>& sizes, std::uint64_t seed, std::ostream& out,
                                   std::size_t trials = 100);

inline constexpr double kGradcheckTolerance = 1e-5;
inline constexpr double kEquivalenceTolerance = 1e-10;

}  // namespace duonet
