// Runs the installed-layout binary end to end. SARA_CLI_PATH is set by the
// build.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args)
{
    const fs::path capture = fs::temp_directory_path() / "sara_cli_stdout.txt";
    const std::string cmd = std::string(SARA_CLI_PATH) + " " + args + " > " + capture.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("sara_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST(Cli, AnalyticToStdout)
{
    const Result r = run("--out - analytic --points 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("phi,success_probability,ase\n", 0), 0u);
}

TEST(Cli, SimulateWritesResultAndSidecarThenReplays)
{
    const fs::path dir = scratch("sim");
    const fs::path a = dir / "a.csv";
    const fs::path b = dir / "b.csv";
    const Result r = run("--scheme optimal_aloha --lambda 0.01 --region 40x40 --slots 100 --drops 2 --out " +
                         a.string() + " simulate --phi-trajectory " + (dir / "phi.csv").string());
    ASSERT_EQ(r.code, 0);
    ASSERT_TRUE(fs::exists(a));
    ASSERT_TRUE(fs::exists(a.string() + ".meta.json"));
    EXPECT_TRUE(fs::exists(dir / "phi.csv"));

    const Result again = run("--replay " + a.string() + ".meta.json --out " + b.string() + " simulate");
    ASSERT_EQ(again.code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    fs::remove_all(dir);
}

TEST(Cli, DefaultOutputDirectory)
{
    const fs::path dir = scratch("env");
    const std::string env = "SARA_OUTPUT_DIR=" + dir.string() + " ";
    const int status = std::system((env + SARA_CLI_PATH + " --format json analytic --points 2 2>/dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(status), 0);
    EXPECT_TRUE(fs::exists(dir / "analytic.json"));
    fs::remove_all(dir);
}

TEST(Cli, SweepRowsFollowGrid)
{
    const Result r = run("--region 40x40 --slots 50 --drops 1 --out - sweep --lambdas 0.01,0.02 "
                         "--schemes optimal_aloha,csma_fixed");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, OracleReportsFixedPoint)
{
    const Result r = run("--out - oracle --pairs 4 --trials 20 --order async");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("converged=yes"), std::string::npos);
    EXPECT_EQ(r.out.rfind("iteration,pair,phi\n", 0), 0u);
}

TEST(Cli, ConfigErrorsExitWithTwo)
{
    EXPECT_EQ(run("--alpha 2 analytic").code, 2);
    EXPECT_EQ(run("--lambda -1 analytic").code, 2);
    EXPECT_EQ(run("--scheme tdma simulate").code, 2);
    EXPECT_EQ(run("--bogus 1 analytic").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("--config /nonexistent.conf analytic").code, 2);
}

TEST(Cli, OutputErrorsExitWithThree)
{
    EXPECT_EQ(run("--out /proc/sara/x.csv analytic").code, 3);
}

TEST(Cli, HelpExitsZero)
{
    EXPECT_EQ(run("--help").code, 0);
}
