#include <json.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("amenlab_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
    const fs::path out = scratch() / "stdout.txt";
    const fs::path err = scratch() / "stderr.txt";
    const std::string cmd = env + " '" AMENLAB_CLI_PATH "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<double> column(const std::string& csv, std::size_t col) {
    std::vector<double> out;
    const auto ls = lines(csv);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        std::istringstream row(ls[i]);
        std::string cell;
        for (std::size_t c = 0; c <= col; ++c) std::getline(row, cell, ',');
        out.push_back(std::stod(cell));
    }
    return out;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream(p) << content;
}

}  // namespace

TEST(Cli, DensityOfVisiblePoints) {
    const auto r = run("density --set visible --N 1000");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out).front(), "n,value,lo,hi");
    const auto values = column(r.out, 1);
    ASSERT_EQ(values.size(), 10u);
    EXPECT_NEAR(values.back(), 0.6079, 0.01);
}

TEST(Cli, NowyCheckOnRandomPairs) {
    const auto r = run("nowy-check --pairs random:20 --seed 7");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("pass").get<bool>());
    EXPECT_EQ(j.at("passed"), 20);
    EXPECT_EQ(j.at("total"), 20);
    EXPECT_EQ(j.at("schema_version"), 1);
    EXPECT_EQ(j.at("tool"), "amenlab");
    EXPECT_TRUE(j.contains("tool_version"));
    EXPECT_EQ(j.at("config").at("seed"), 7);
    EXPECT_EQ(j.at("config").at("pairs"), "random:20");
}

TEST(Cli, TemperedRatiosOnZ) {
    const auto r = run("tempered --group z:1 --kind boxes --n 100");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out).front(), "n,value");
    const auto values = column(r.out, 1);
    ASSERT_EQ(values.size(), 100u);
    for (double v : values) EXPECT_LE(v, 2.0);
    EXPECT_GE(values.back(), 1.95);
}

TEST(Cli, TemperedFailsAboveBound) {
    const auto r = run("tempered --group z:1 --kind boxes --n 20 --C 1.5");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(lines(r.out).front(), "n,value");
}

TEST(Cli, TemperedSubsequenceReport) {
    const auto r = run("tempered --group z:1 --kind boxes --horizon 40 --C 1.2");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("subsequence"), (std::vector<int>{1, 4, 19}));
}

TEST(Cli, UsageErrorsExitOne) {
    for (const char* args : {"density --set nosuch --N 10", "nosuch-command", "", "density --N notanumber",
                             "dbar --x visible", "tempered --group q:2 --n 5", "transport --mu /nonexistent --nu /nonexistent"}) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 1) << args;
        EXPECT_FALSE(r.err.empty()) << args;
    }
    const auto named = run("density --set nosuch --N 10");
    EXPECT_EQ(named.err.rfind("amenlab: ", 0), 0u) << named.err;
}

TEST(Cli, HelpExitsZero) {
    const auto r = run("--help");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("nowy-check"), std::string::npos);
}

TEST(Cli, TransportFromFiles) {
    const fs::path mu = scratch() / "mu.json";
    const fs::path nu = scratch() / "nu.json";
    write_file(mu, R"({"window": [[0]], "entries": [[[0], 1, 5], [[1], 4, 5]]})");
    write_file(nu, R"({"window": [[0]], "entries": [[[0], 7, 10], [[1], 3, 10]]})");
    const auto r = run("transport --mu '" + mu.string() + "' --nu '" + nu.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("value").at("num"), 1);
    EXPECT_EQ(j.at("value").at("den"), 2);
    EXPECT_TRUE(j.at("certified").get<bool>());

    write_file(nu, R"({"window": [[0]], "entries": [[[0], 1, 2]]})");
    EXPECT_EQ(run("transport --mu '" + mu.string() + "' --nu '" + nu.string() + "'").code, 1);
}

TEST(Cli, CsvTraceCommands) {
    const auto b = run("besicovitch --x visible --z prime-approx:2 --N 200 --R 6");
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(lines(b.out).front(), "n,value,lo,hi");
    const auto d = run("dprime --x periodic:01 --z periodic:0 --N 100");
    ASSERT_EQ(d.code, 0) << d.err;
    EXPECT_EQ(lines(d.out).front(), "n,value,saturated");
    const auto db = run("dbar --x periodic:01 --z periodic:0 --kind boxes --n 9,19,99");
    ASSERT_EQ(db.code, 0) << db.err;
    EXPECT_EQ(lines(db.out).front(), "n,value,lo,hi");
    for (double v : column(db.out, 1)) EXPECT_DOUBLE_EQ(v, 0.5);
    const auto e = run("entropy --set rf-sub:2 --N 2000 --k-max 3");
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(lines(e.out).front(), "k,value");
    EXPECT_EQ(column(e.out, 1).size(), 3u);
}

TEST(Cli, JsonReportCommands) {
    const auto emp = run("empirical --set periodic:01 --kind boxes --n 9 --window 2");
    ASSERT_EQ(emp.code, 0) << emp.err;
    EXPECT_EQ(json::parse(emp.out).at("distribution").at("entries").size(), 2u);

    const auto rho = run("rho-chain --x periodic:0110 --z periodic:011");
    ASSERT_EQ(rho.code, 0) << rho.err;
    EXPECT_EQ(json::parse(rho.out).at("oracle").at("value"), 0.5);

    const auto glue = run("glue-check --triples random:30 --seed 3");
    ASSERT_EQ(glue.code, 0) << glue.err;
    EXPECT_EQ(json::parse(glue.out).at("passed"), 30);

    const auto tri = run("triangle-check --triples random:20 --seed 4");
    ASSERT_EQ(tri.code, 0) << tri.err;

    const auto omega = run("omega --set periodic:01 --kind boxes --n 9,19,39");
    ASSERT_EQ(omega.code, 0) << omega.err;
    EXPECT_EQ(json::parse(omega.out).at("clusters"), 1);

    const auto list = run("examples");
    ASSERT_EQ(list.code, 0) << list.err;
    EXPECT_GE(json::parse(list.out).at("names").size(), 3u);

    const auto sub = run("examples --set rf-sub:3 --window 5");
    ASSERT_EQ(sub.code, 0) << sub.err;
    EXPECT_TRUE(json::parse(sub.out).contains("tiling"));
}

TEST(Cli, ConvergencePipelines) {
    const auto r = run("convergence --stages 4");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("pass").get<bool>());
    EXPECT_EQ(j.at("substitution").size(), 4u);
    EXPECT_EQ(j.at("approximants").size(), 4u);
}

TEST(Cli, ConfigFileWithOverrides) {
    const fs::path cfg = scratch() / "run.cfg";
    write_file(cfg, "# visible vs its first approximant\ncommand = dbar\nx = visible\nz = prime-approx:1\nN = 100\n");
    const auto from_file = run("--config '" + cfg.string() + "'");
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    EXPECT_EQ(column(from_file.out, 0).back(), 100.0);
    const auto overridden = run("dbar --config '" + cfg.string() + "' --N 50");
    ASSERT_EQ(overridden.code, 0) << overridden.err;
    EXPECT_EQ(column(overridden.out, 0).back(), 50.0);

    write_file(cfg, "this line has no equals sign\n");
    EXPECT_EQ(run("dbar --config '" + cfg.string() + "'").code, 1);
    EXPECT_EQ(run("dbar --config /nonexistent.cfg").code, 1);
}

TEST(Cli, OutputIsDeterministicAcrossThreadCounts) {
    const fs::path out = scratch() / "glue.json";
    const std::string args = "glue-check --triples random:40 --seed 11 --out '" + out.string() + "'";
    ASSERT_EQ(run(args, "LAB_THREADS=1").code, 0);
    const std::string one = slurp(out);
    ASSERT_EQ(run(args, "LAB_THREADS=8").code, 0);
    EXPECT_EQ(slurp(out), one);
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(slurp(out), one);
    EXPECT_FALSE(fs::exists(out.string() + ".tmp"));

    const fs::path n1 = scratch() / "nowy.json";
    const std::string nowy = "nowy-check --pairs random:6 --seed 2 --out '" + n1.string() + "'";
    ASSERT_EQ(run(nowy, "LAB_THREADS=1").code, 0);
    const std::string first = slurp(n1);
    ASSERT_EQ(run(nowy, "LAB_THREADS=4").code, 0);
    EXPECT_EQ(slurp(n1), first);
}

TEST(Cli, UnwritableOutputExitsOne) {
    EXPECT_EQ(run("examples --out /nonexistent-dir/report.json").code, 1);
}
