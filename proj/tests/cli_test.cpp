// Runs the duonet executable end to end and checks outputs and exit codes.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "duonet/checkpoint.hpp"
#include "duonet/config.hpp"
#include "duonet/data.hpp"

namespace duonet {
namespace {

namespace fs = std::filesystem;

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run(const std::string& args) {
    const std::string cmd = std::string(DUONET_CLI) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> key_values(const std::string& text, char sep = '\n') {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        std::istringstream fields(item);
        std::string field;
        while (fields >> field) {
            const auto eq = field.find('=');
            if (eq != std::string::npos) kv[field.substr(0, eq)] = field.substr(eq + 1);
        }
    }
    return kv;
}

const char* kSmallConfig = R"(seed = 3

[data]
seed = 1
num_samples = 600

[window]
m = 8
n = 2

[optim]
alpha = 0.01
batch_size = 16
epochs = 3

[block0]
s_in = 8
s_out = 4
activation = gelu

[block1]
s_in = 4
s_out = 2
activation = identity
)";

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("duonet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
        std::ofstream(path("small.ini")) << kSmallConfig;
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

TEST_F(Cli, GenerateIsDeterministicAndWritesSidecar) {
    ASSERT_EQ(run("generate --config " + path("small.ini") + " --out " + path("a.csv") + " --seed 1").code, 0);
    ASSERT_EQ(run("generate --config " + path("small.ini") + " --out " + path("b.csv") + " --seed 1").code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

    const SignalRecord rec = load_csv(path("a.csv"));
    EXPECT_EQ(rec.length(), 600u);
    EXPECT_EQ(slurp(path("a.csv")).substr(0, 6), "u0,y0\n");

    const auto kv = key_values(slurp(path("a.csv.params")));
    ASSERT_EQ(kv.count("beta1"), 1u);
    ASSERT_EQ(kv.count("alpha5"), 1u);
    EXPECT_EQ(kv.at("seed"), "1");
    const double b1 = std::stod(kv.at("beta1")), b2 = std::stod(kv.at("beta2"));
    for (std::size_t k = 0; k < rec.length(); ++k) {
        EXPECT_NEAR(rec.y(k, 0), b1 * rec.u(k, 0) + std::numbers::pi * b2, 1e-12);
    }
}

TEST_F(Cli, TrainIsBitReproducibleAndEvaluateReportsMetrics) {
    const CliResult a = run("train --quiet --config " + path("small.ini") + " --out " + path("a.ckpt"));
    const CliResult b = run("train --quiet --config " + path("small.ini") + " --out " + path("b.ckpt"));
    ASSERT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(a.out.substr(0, a.out.find("checkpoint=")), b.out.substr(0, b.out.find("checkpoint=")));
    EXPECT_EQ(slurp(path("a.ckpt")), slurp(path("b.ckpt")));

    const auto summary = key_values(a.out);
    EXPECT_EQ(summary.at("epochs"), "3");
    EXPECT_EQ(summary.at("parameters"), "98");

    const CliResult ev = run("evaluate --checkpoint " + path("a.ckpt"));
    ASSERT_EQ(ev.code, 0);
    EXPECT_EQ(ev.out.rfind("rmse=", 0), 0u) << ev.out;
    const auto kv = key_values(ev.out);
    EXPECT_EQ(kv.at("rmse"), summary.at("test_rmse"));
    EXPECT_EQ(kv.at("nrmse_pct"), summary.at("test_nrmse_pct"));
    EXPECT_EQ(kv.at("n"), summary.at("test_n"));

    const CliResult seeded = run("train --quiet --seed 4 --config " + path("small.ini") + " --out " + path("c.ckpt"));
    ASSERT_EQ(seeded.code, 0);
    EXPECT_NE(slurp(path("a.ckpt")), slurp(path("c.ckpt")));
    EXPECT_EQ(load_checkpoint(path("c.ckpt")).seed, 4u);
}

TEST_F(Cli, TrainAndEvaluateOnExternalCsv) {
    ASSERT_EQ(run("generate --config " + path("small.ini") + " --out " + path("d.csv")).code, 0);
    ASSERT_EQ(run("train --quiet --config " + path("small.ini") + " --data " + path("d.csv") + " --out " +
                  path("d.ckpt"))
                  .code,
              0);
    const TrainConfig echoed = parse_config(load_checkpoint(path("d.ckpt")).config_echo);
    EXPECT_EQ(echoed.data.source, "csv");
    EXPECT_EQ(echoed.data.path, path("d.csv"));
    EXPECT_EQ(run("evaluate --checkpoint " + path("d.ckpt") + " --data " + path("d.csv")).code, 0);
    EXPECT_EQ(run("evaluate --checkpoint " + path("d.ckpt") + " --data " + path("d.csv") + " --segment test").code, 0);
}

TEST_F(Cli, PredictOnPerfectIdentityModelHasZeroError) {
    BlockSpec s;
    s.shape = BlockShape{4, 1, 1, 1};
    s.transform_enabled = false;
    s.activation = Activation::identity;
    Network net({DualBlock(s)});
    net.block(0).w_l()(0, 3) = 1.0;
    TrainConfig cfg;
    cfg.model = {s};
    cfg.window = {4, 1, 1};
    save_checkpoint(Checkpoint{net, print_config(cfg), 0}, path("id.ckpt"));

    RealMatrix u(30, 1);
    for (std::size_t k = 0; k < 30; ++k) u(k, 0) = std::cos(0.4 * static_cast<double>(k));
    save_csv(SignalRecord{u, u, 1.0}, path("id.csv"));

    ASSERT_EQ(run("predict --checkpoint " + path("id.ckpt") + " --data " + path("id.csv") + " --out " +
                  path("pred.csv"))
                  .code,
              0);
    std::istringstream csv(slurp(path("pred.csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "t,y,yhat,err");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        EXPECT_EQ(line.substr(line.rfind(',') + 1), "0") << line;
        EXPECT_EQ(line.substr(0, line.find(',')), std::to_string(3 + rows));
        ++rows;
    }
    EXPECT_EQ(rows, 27u);
}

TEST(CliChecks, GradcheckDefaultPasses) {
    const CliResult r = run("gradcheck");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_LT(std::stod(key_values(r.out).at("max_rel_error")), 1e-5);
}

TEST(CliChecks, GradcheckStepIsReportedAndRangeChecked) {
    const CliResult r = run("gradcheck --step 1e-5");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(key_values(r.out).at("step"), "1e-05");
    EXPECT_EQ(run("gradcheck --step 1e-2").code, 1);
}

TEST(CliChecks, EquivcheckPrintsOneLinePerSize) {
    const CliResult r = run("equivcheck 2 4 8");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    int lines = 0;
    for (const char* n : {"2", "4", "8"}) {
        ASSERT_TRUE(std::getline(in, line));
        const auto kv = key_values(line);
        EXPECT_EQ(kv.at("n"), n);
        EXPECT_LT(std::stod(kv.at("max_deviation")), 1e-10);
        ++lines;
    }
    EXPECT_FALSE(std::getline(in, line));
    EXPECT_EQ(lines, 3);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("bogus").code, 1);
    EXPECT_EQ(run("train --out " + path("x.ckpt")).code, 1);
    std::ofstream(path("bad_value.ini")) << "[optim]\nalpha = 0\n";
    EXPECT_EQ(run("train --config " + path("bad_value.ini") + " --out " + path("x.ckpt")).code, 1);

    std::ofstream(path("garbage.csv")) << "u0,y0\n1,abc\n";
    EXPECT_EQ(run("train --config " + path("small.ini") + " --data " + path("garbage.csv") + " --out " +
                  path("x.ckpt"))
                  .code,
              2);
    EXPECT_EQ(run("evaluate --checkpoint " + path("missing.ckpt")).code, 2);
    std::ofstream(path("junk.ckpt")) << "not a checkpoint";
    EXPECT_EQ(run("evaluate --checkpoint " + path("junk.ckpt")).code, 2);
    std::ofstream(path("syntax.ini")) << "[optim\n";
    EXPECT_EQ(run("train --config " + path("syntax.ini") + " --out " + path("x.ckpt")).code, 2);

    std::string diverging = kSmallConfig;
    diverging.replace(diverging.find("alpha = 0.01"), 12, "alpha = 1e200\nkind = sgd");
    std::ofstream(path("diverge.ini")) << diverging;
    EXPECT_EQ(run("train --quiet --config " + path("diverge.ini") + " --out " + path("x.ckpt")).code, 3);
}

}  // namespace
}  // namespace duonet
