// End-to-end runs of the dephase executable.
#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DEPHASE_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
    const int raw = pclose(p);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string sample(const char* name) { return std::string(DEPHASE_SAMPLES) + "/" + name; }

} // namespace

TEST(Cli, OutputIsByteIdenticalAcrossRunsAndThreads) {
    const auto a = run("measures --grid lambda:0.1:3:12:log --threads 1");
    const auto b = run("measures --grid lambda:0.1:3:12:log --threads 1");
    const auto c = run("measures --grid lambda:0.1:3:12:log --threads 6");
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    EXPECT_NE(a.out.find("lambda,s,blp,rhp,flag"), std::string::npos);
    EXPECT_NE(a.out.find("# tool: dephase"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("nonsense").status, 1);
    EXPECT_EQ(run("measures --grid lambda:1:0:3:lin").status, 1);
    EXPECT_EQ(run("qrt --lambda abc").status, 1);
    EXPECT_EQ(run("qrt --beta 2").status, 1);
    EXPECT_EQ(run("measures --model-file /nonexistent/file.toml").status, 1);
    EXPECT_EQ(run("photonic --panel a --lambda 1").status, 1);
    // gamma(t1) underflows: a numerical failure, not a usage error
    EXPECT_EQ(run("oracle --lambda 400 --s 3 --t1 5 --grid t2:5:6:2:lin --modes 64").status, 2);
    // an 8-mode oracle is too coarse for the suite tolerances
    EXPECT_EQ(run("check --modes 8").status, 3);
}

TEST(Cli, CheckReportIsJson) {
    const auto r = run("check --lambda 1 --s 3");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("command"), "check");
    EXPECT_TRUE(j.at("passed").get<bool>());
    ASSERT_GE(j.at("checks").size(), 10u);
    EXPECT_EQ(j.at("check_count").get<std::size_t>(), j.at("checks").size());
    for (const auto& c : j.at("checks")) {
        EXPECT_TRUE(c.contains("name"));
        EXPECT_TRUE(c.at("passed").get<bool>() || c.at("skipped").get<bool>()) << c.dump();
    }
}

TEST(Cli, JsonTableAndOutFile) {
    const auto path = std::filesystem::temp_directory_path() / "dephase_cli_test.json";
    std::filesystem::remove(path);
    const auto r = run("qrt --grid lambda:0:1:3:lin --s 3 --format json --out " + path.string());
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j.at("columns").size(), 4u);
    ASSERT_EQ(j.at("rows").size(), 3u);
    EXPECT_EQ(j.at("rows")[0][2].get<double>(), 0.0);
    EXPECT_GT(j.at("rows")[2][2].get<double>(), 0.0);
    std::filesystem::remove(path);
}

TEST(Cli, SamplesRun) {
    for (const char* f : {"measures_vs_coupling.toml", "photonic_semigroup.toml",
                          "finite_temperature_oracle.toml"}) {
        std::string cmd = std::string(f).starts_with("measures") ? "measures"
                          : std::string(f).starts_with("photonic") ? "photonic --panel times"
                                                                   : "oracle";
        const auto r = run(cmd + " --model-file " + sample(f));
        EXPECT_EQ(r.status, 0) << f;
        EXPECT_FALSE(r.out.empty()) << f;
    }
}
