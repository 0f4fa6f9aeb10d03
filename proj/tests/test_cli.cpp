#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rosenau/cli/config.hpp"
#include "rosenau/cli/output.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* p = std::getenv("ROSENAU_CLI");
    return p ? p : ROSENAU_CLI_PATH;
}

std::string source_dir() {
    const char* p = std::getenv("ROSENAU_SOURCE_DIR");
    return p ? p : ROSENAU_SOURCE_PATH;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(::testing::TempDir()) / ("rosenau_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "stdout.txt";
    const std::string cmd = "\"" + cli() + "\" " + args + " > \"" + log.string() + "\" 2>\"" +
                            (dir / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "exp.cfg";
    std::ofstream(p) << text;
    return p;
}

const char* const kMinimal = R"([kernel]
family = rosenau
[sweep]
epsilons = 0.5
times = 1
[grid]
L = 60
N = 512
[output]
metrics = mass, d2_selfsim
)";

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST(ConfigParser, ParsesSectionsAndLists) {
    std::istringstream in("[kernel]\nfamily = rosenau, central-diff ; comment\n[sweep]\nepsilons = 0.5,0.1\n"
                          "times = log:1:100:3\n[rates]\nwindow = 2:50\n");
    const auto c = rosenau::cli::parse_config(in);
    EXPECT_EQ(c.kernels, (std::vector<std::string>{"rosenau", "central-diff"}));
    EXPECT_EQ(c.epsilons, (std::vector<double>{0.5, 0.1}));
    ASSERT_EQ(c.times.size(), 3u);
    EXPECT_DOUBLE_EQ(c.times[1], 10.0);
    EXPECT_EQ(c.fit_window, (std::pair<double, double>{2.0, 50.0}));
}

TEST(ConfigParser, ReportsOffendingLine) {
    std::istringstream in("[sweep]\nepsilons = 0.5\ntimes 1\n");
    try {
        rosenau::cli::parse_config(in, "x.cfg");
        FAIL() << "expected ConfigError";
    } catch (const rosenau::cli::ConfigError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    std::istringstream unknown("[sweep]\nepsilon = 0.5\n");
    EXPECT_THROW(rosenau::cli::parse_config(unknown), rosenau::cli::ConfigError);
    std::istringstream metric("[output]\nmetrics = d4_selfsim\n");
    EXPECT_THROW(rosenau::cli::parse_config(metric), rosenau::cli::ConfigError);
}

TEST(Cli, MinimalMetricsRun) {
    const fs::path dir = scratch("minimal");
    const fs::path cfg = write_config(dir, kMinimal);
    const CliRun r = run("metrics " + cfg.string() + " --out " + (dir / "out").string(), dir);
    ASSERT_EQ(r.code, 0) << slurp(dir / "stderr.txt");
    const auto rows = lines(slurp(dir / "out" / "results.csv"));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "kernel,epsilon,t,quantity,value,argsup,grid_L,grid_N");
    EXPECT_EQ(rows[1].rfind("rosenau,0.5,1,mass,", 0), 0u) << rows[1];
    EXPECT_EQ(rows[2].rfind("rosenau,0.5,1,d2_selfsim,", 0), 0u) << rows[2];
    const auto parsed = rosenau::cli::read_csv((dir / "out" / "results.csv").string());
    EXPECT_NEAR(parsed[0].value, 1.0, 1e-12);
}

TEST(Cli, DeterministicAcrossThreadCounts) {
    const fs::path dir = scratch("determinism");
    const fs::path cfg = write_config(dir, R"([kernel]
family = rosenau, central-diff
[sweep]
epsilons = 0.5, 0.2
times = 0.5, 2, 8
[grid]
N = 1024
[output]
metrics = d2_selfsim, d2_approx, m2
)");
    ASSERT_EQ(run("metrics " + cfg.string() + " --threads 1 --out " + (dir / "a").string(), dir).code, 0);
    ASSERT_EQ(run("metrics " + cfg.string() + " --threads 3 --out " + (dir / "b").string(), dir).code, 0);
    const std::string a = slurp(dir / "a" / "results.csv");
    EXPECT_EQ(lines(a).size(), 1u + 3u * 12u);
    EXPECT_EQ(a, slurp(dir / "b" / "results.csv"));
}

TEST(Cli, UsageErrorsExitTwo) {
    const fs::path dir = scratch("usage");
    EXPECT_EQ(run("frobnicate", dir).code, 2);
    EXPECT_EQ(run("metrics", dir).code, 2);
    const fs::path bad = write_config(dir, "[sweep]\nepsilons = 0.5\ntimes = 1\nthis line is wrong\n");
    EXPECT_EQ(run("metrics " + bad.string(), dir).code, 2);
    EXPECT_NE(slurp(dir / "stderr.txt").find(":4:"), std::string::npos);
}

TEST(Cli, InfiniteDistanceIsNumericalFailure) {
    const fs::path dir = scratch("infinite");
    // Unit-variance data against a variance-2 reference has no d_3 distance.
    const fs::path cfg = write_config(dir, R"([sweep]
epsilons = 0.5
times = 1
[initial]
preset = gaussian
[grid]
N = 512
[output]
metrics = d3_selfsim
)");
    EXPECT_EQ(run("metrics " + cfg.string() + " --out " + (dir / "o").string(), dir).code, 1);
}

TEST(Cli, ReproductionChecksPass) {
    const fs::path dir = scratch("d2_approximation");
    const fs::path cfg = fs::path(source_dir()) / "configs" / "d2_approximation.cfg";
    const CliRun r = run("check " + cfg.string() + " --out " + (dir / "o").string(), dir);
    EXPECT_EQ(r.code, 0) << slurp(dir / "stderr.txt");
    EXPECT_NE(r.out.find("bound checks satisfied"), std::string::npos);
    const std::string jsonl = slurp(dir / "o" / "checks.jsonl");
    EXPECT_EQ(lines(jsonl).size(), 2u * 4u * 8u * 2u);
    EXPECT_TRUE(fs::exists(dir / "o" / "d2_approx.svg"));
}

TEST(Cli, AppendixTable) {
    const fs::path dir = scratch("appendix");
    const CliRun r = run("appendix --s 0.9 --tmax 1000 --points 8", dir);
    ASSERT_EQ(r.code, 0) << slurp(dir / "stderr.txt");
    const auto out = lines(r.out);
    ASSERT_EQ(out.size(), 2u + 9u);
    EXPECT_NE(out[1].find("B_s(t)"), std::string::npos);
    std::istringstream first(out[2]);
    double t = -1, b = -1;
    first >> t >> b;
    EXPECT_EQ(t, 0.0);
    EXPECT_EQ(b, 0.0);
    EXPECT_EQ(run("appendix --s 1.2", dir).code, 1);
}

TEST(Cli, PlotWritesSvg) {
    const fs::path dir = scratch("plot");
    const fs::path cfg = write_config(dir, kMinimal);
    ASSERT_EQ(run("metrics " + cfg.string() + " --out " + (dir / "out").string(), dir).code, 0);
    const CliRun r = run("plot --csv " + (dir / "out" / "results.csv").string() + " --out " + (dir / "p").string(), dir);
    ASSERT_EQ(r.code, 0) << slurp(dir / "stderr.txt");
    const std::string svg = slurp(dir / "p" / "d2_selfsim.svg");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Cli, RatesRecoverHeatExponent) {
    const fs::path dir = scratch("rates");
    const fs::path cfg = write_config(dir, R"([kernel]
family = rosenau
[sweep]
epsilons = 0.2
times = log:1:200:16
[grid]
N = 2048
[output]
metrics = d2_heat
)");
    const CliRun r = run("rates " + cfg.string() + " --out " + (dir / "o").string(), dir);
    ASSERT_EQ(r.code, 0) << slurp(dir / "stderr.txt");
    bool found = false;
    for (const auto& l : lines(r.out)) {
        std::istringstream in(l);
        std::string kernel, eps, q;
        double exponent = 0.0;
        if (in >> kernel >> eps >> q >> exponent && q == "d2_heat") {
            found = true;
            EXPECT_NEAR(exponent, -1.0, 0.1);
        }
    }
    EXPECT_TRUE(found) << r.out;
}

TEST(Cli, SimulateDumpsDistributions) {
    const fs::path dir = scratch("simulate");
    const fs::path cfg = write_config(dir, R"([kernel]
family = central-diff
[sweep]
epsilons = 0.5
times = 1
[initial]
preset = dirac
[grid]
N = 256
)");
    ASSERT_EQ(run("simulate " + cfg.string() + " --out " + (dir / "o").string(), dir).code, 0)
        << slurp(dir / "stderr.txt");
    EXPECT_TRUE(fs::exists(dir / "o" / "solution_central-diff_eps0.5_t1.txt"));
}
