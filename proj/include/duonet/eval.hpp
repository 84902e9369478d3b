#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "duonet/data.hpp"
#include "duonet/network.hpp"

namespace duonet {

struct EvalResult {
    double rmse = 0.0;
    double nrmse = 0.0;  // fraction; multiply by 100 for percent
    std::size_t n_points = 0;
};

double rmse(std::span<const double> y, std::span<const double> yhat);
/// Population standard deviation (divisor N).
double population_stddev(std::span<const double> y);
/// rmse / population_stddev(y); throws DegenerateTargetError for constant y.
double nrmse(std::span<const double> y, std::span<const double> yhat);

EvalResult evaluate(std::span<const double> y, std::span<const double> yhat);

/// Free-run prediction over a record using only its input signal.
struct Simulation {
    std::vector<std::size_t> indices;  // record row of each predicted row
    RealMatrix y;                      // measured outputs at those rows
    RealMatrix yhat;                   // predictions
    EvalResult metrics;
};

/// Windows of m = net input rows end at s = max(m, n), max(m, n) + stride, ...; each
/// predicts rows [s - n, s). With stride == n every covered row is predicted once. Rows
/// before max(m, n) - n and a trailing remainder shorter than n are not scored.
Simulation simulate(const Network& net, const SignalRecord& rec, std::size_t stride);
Simulation simulate(const Network& net, const SignalRecord& rec);

}  // namespace duonet
