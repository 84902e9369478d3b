#include "duonet/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "duonet/rng.hpp"

namespace duonet {

void validate(const SignalRecord& rec) {
    if (rec.u.rows() != rec.y.rows()) {
        throw ShapeError("signal record input has " + std::to_string(rec.u.rows()) + " samples but output has " +
                         std::to_string(rec.y.rows()));
    }
}

namespace {

RealMatrix row_range(const RealMatrix& m, std::size_t begin, std::size_t end) {
    const auto d = m.data();
    return RealMatrix(end - begin, m.cols(),
                      RealVector(d.begin() + static_cast<std::ptrdiff_t>(begin * m.cols()),
                                 d.begin() + static_cast<std::ptrdiff_t>(end * m.cols())));
}

}  // namespace

SignalRecord slice(const SignalRecord& rec, std::size_t begin, std::size_t end) {
    validate(rec);
    if (begin >= end || end > rec.length()) {
        throw ShapeError("slice [" + std::to_string(begin) + ", " + std::to_string(end) + ") of a record with " +
                         std::to_string(rec.length()) + " samples");
    }
    return SignalRecord{row_range(rec.u, begin, end), row_range(rec.y, begin, end), rec.sample_period};
}

std::vector<std::size_t> window_ends(std::size_t length, std::size_t m, std::size_t n, std::size_t stride) {
    if (m == 0 || n == 0 || stride == 0) throw ConfigError("window lengths and stride must be >= 1");
    const std::size_t first = std::max(m, n);
    if (length < first) {
        throw InsufficientDataError("record of " + std::to_string(length) + " samples is shorter than window length " +
                                    std::to_string(first));
    }
    std::vector<std::size_t> ends;
    ends.reserve((length - first) / stride + 1);
    for (std::size_t s = first; s <= length; s += stride) ends.push_back(s);
    return ends;
}

WindowedDataset build_windows(const SignalRecord& rec, std::size_t m, std::size_t n, std::size_t stride) {
    validate(rec);
    WindowedDataset ds{{}, m, n, stride};
    for (std::size_t s : window_ends(rec.length(), m, n, stride)) {
        ds.windows.push_back(Window{row_range(rec.u, s - m, s), row_range(rec.y, s - n, s), s});
    }
    return ds;
}

StaticSystem generate_static_system(std::uint64_t seed, std::size_t num_samples, double dt) {
    if (num_samples == 0) throw ConfigError("static system needs at least one sample");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sampling period must be positive");

    CounterRng rng(seed, streams::synthetic);
    StaticSystemParams p;
    for (double& a : p.alpha) a = rng.uniform(-5.0, 5.0);
    p.beta1 = rng.uniform(-5.0, 5.0);
    p.beta2 = rng.uniform(-5.0, 5.0);

    RealVector u(num_samples), y(num_samples);
    const double offset = std::numbers::pi * p.beta2;
    for (std::size_t k = 0; k < num_samples; ++k) {
        const double t = static_cast<double>(k) * dt;
        double acc = 0.0;
        for (double a : p.alpha) acc += std::sin(a * t);
        u[k] = acc;
        y[k] = p.beta1 * acc + offset;
    }
    return StaticSystem{SignalRecord{RealMatrix(num_samples, 1, std::move(u)), RealMatrix(num_samples, 1, std::move(y)), dt},
                        p};
}

SplitRecords split_record(const SignalRecord& rec, double train_fraction, double validation_fraction) {
    validate(rec);
    const double test_fraction = 1.0 - train_fraction - validation_fraction;
    if (!(train_fraction > 0.0) || !(validation_fraction > 0.0) || !(test_fraction > 1e-12)) {
        throw ConfigError("split fractions must be positive and sum to 1");
    }
    const std::size_t len = rec.length();
    const auto train_end = static_cast<std::size_t>(std::floor(static_cast<double>(len) * train_fraction + 1e-9));
    const auto val_end =
        static_cast<std::size_t>(std::floor(static_cast<double>(len) * (train_fraction + validation_fraction) + 1e-9));
    if (train_end == 0 || val_end <= train_end || val_end >= len) {
        throw InsufficientDataError("record of " + std::to_string(len) + " samples is too short to split");
    }
    return SplitRecords{slice(rec, 0, train_end), slice(rec, train_end, val_end), slice(rec, val_end, len)};
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void save_csv(const SignalRecord& rec, const std::filesystem::path& path) {
    validate(rec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (std::size_t c = 0; c < rec.u.cols(); ++c) out << (c ? "," : "") << 'u' << c;
    for (std::size_t c = 0; c < rec.y.cols(); ++c) out << ',' << 'y' << c;
    out << '\n';
    for (std::size_t r = 0; r < rec.length(); ++r) {
        for (std::size_t c = 0; c < rec.u.cols(); ++c) out << (c ? "," : "") << format_double(rec.u(r, c));
        for (std::size_t c = 0; c < rec.y.cols(); ++c) out << ',' << format_double(rec.y(r, c));
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

SignalRecord load_csv(const std::filesystem::path& path, double sample_period) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    if (!next_line()) throw FormatError(path.string() + ": missing header", 1);
    const auto header = split_fields(line);
    std::size_t d_in = 0;
    while (d_in < header.size() && header[d_in] == "u" + std::to_string(d_in)) ++d_in;
    std::size_t d_out = 0;
    while (d_in + d_out < header.size() && header[d_in + d_out] == "y" + std::to_string(d_out)) ++d_out;
    if (d_in == 0 || d_out == 0 || d_in + d_out != header.size()) {
        throw FormatError(path.string() + ": header must be u0..,y0.. columns", line_no);
    }

    RealVector u, y;
    const std::size_t width = d_in + d_out;
    while (next_line()) {
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != width) {
            throw FormatError(path.string() + ": expected " + std::to_string(width) + " fields, got " +
                                  std::to_string(fields.size()),
                              line_no);
        }
        for (std::size_t c = 0; c < width; ++c) {
            const std::string& f = fields[c];
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(v)) {
                throw FormatError(path.string() + ": cannot parse '" + f + "' as a number", line_no);
            }
            (c < d_in ? u : y).push_back(v);
        }
    }
    if (u.empty()) throw FormatError(path.string() + ": no data rows", line_no);
    const std::size_t rows = u.size() / d_in;
    return SignalRecord{RealMatrix(rows, d_in, std::move(u)), RealMatrix(rows, d_out, std::move(y)), sample_period};
}

}  // namespace duonet
