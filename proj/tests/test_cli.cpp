#include "splash/cli.hpp"
#include "splash/crapper.hpp"
#include "splash/state_io.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace splash;
using nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out, err;
};

Outcome run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = std::filesystem::temp_directory_path()
               / ("splash_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p)
    {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    }

    std::filesystem::path dir_;
};

} // namespace

TEST(GridSpec, Parsing)
{
    const cli::GridSpec g = cli::parse_grid("-1:1:3,-3:-1.5:4");
    EXPECT_EQ(g.x.count, 3);
    EXPECT_EQ(g.x.at(2), 1.0);
    EXPECT_EQ(g.y.at(0), -3.0);
    EXPECT_EQ(g.y.at(3), -1.5);
    EXPECT_DOUBLE_EQ(g.y.spacing(), 0.5);
    EXPECT_EQ(cli::parse_grid("0:0:1,2:2:1").x.spacing(), 0.0);
    for (const char* bad : {"", "1:2:3", "1:2:3,4:5", "a:1:2,0:1:2", "0:1:0,0:1:2", "0:1:2,0:1:2x", "0:1:2,0:1:2,0:1:2",
                            "0:inf:2,0:1:2"})
        EXPECT_THROW(cli::parse_grid(bad), std::invalid_argument) << bad;
    EXPECT_EQ(cli::sidecar_path("out.json"), "out.json.last.json");
}

TEST(Cli, HelpAndUsageErrors)
{
    EXPECT_EQ(run({"--help"}).code, cli::ok);
    EXPECT_EQ(run({"solve", "--help"}).code, cli::ok);
    EXPECT_EQ(run({}).code, cli::usage_error);
    EXPECT_EQ(run({"bogus"}).code, cli::usage_error);
    EXPECT_EQ(run({"crapper", "--A", "0.3"}).code, cli::usage_error);
    EXPECT_EQ(run({"crapper", "--A", "x", "--out", "o.json"}).code, cli::usage_error);
    EXPECT_EQ(run({"validate", "--level", "thorough"}).code, cli::usage_error);
}

TEST_F(CliTest, CrapperExport)
{
    const std::string out = path("c.json");
    const Outcome o = run({"crapper", "--A", "0.3", "--out", out});
    ASSERT_EQ(o.code, cli::ok) << o.err;
    const json summary = json::parse(o.out);
    EXPECT_EQ(summary.at("report").at("classification"), "graph");
    const io::CurveFile f = io::read_curve_file(out);
    EXPECT_EQ(f.n, 512);
    EXPECT_TRUE(f.omega.has_value());
    EXPECT_TRUE(io::revalidate(f).consistent);
}

TEST_F(CliTest, CrapperClassifiesAcrossTheSplash)
{
    const Outcome flat = run({"crapper", "--A", "0", "--out", path("flat.json")});
    ASSERT_EQ(flat.code, cli::ok);
    EXPECT_EQ(json::parse(flat.out).at("report").at("classification"), "graph");
    const Outcome cross = run({"crapper", "--A", "0.46", "--out", path("x.json")});
    ASSERT_EQ(cross.code, cli::ok) << cross.err;
    const json j = json::parse(cross.out);
    EXPECT_EQ(j.at("report").at("classification"), "crossing");
    EXPECT_EQ(j.at("report").at("intersections"), 2);
}

TEST_F(CliTest, CrapperRejectsInvalidInput)
{
    EXPECT_EQ(run({"crapper", "--A", "1.5", "--out", path("a.json")}).code, cli::usage_error);
    EXPECT_EQ(run({"crapper", "--A", "-0.1", "--out", path("a.json")}).code, cli::usage_error);
    EXPECT_EQ(run({"crapper", "--A", "0.3", "--n", "100", "--out", path("a.json")}).code, cli::usage_error);
    EXPECT_FALSE(std::filesystem::exists(path("a.json")));
}

TEST_F(CliTest, OutputIsByteReproducible)
{
    ASSERT_EQ(run({"crapper", "--A", "0.35", "--out", path("a.json")}).code, cli::ok);
    ASSERT_EQ(run({"crapper", "--A", "0.35", "--out", path("b.json")}).code, cli::ok);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, SolveMatchesCrapperAtZeroDensityAndGravity)
{
    ASSERT_EQ(run({"crapper", "--A", "0.3", "--n", "256", "--out", path("c.json")}).code, cli::ok);
    const Outcome o = run({"solve", "--A", "0.3", "--n", "256", "--out", path("s.json")});
    ASSERT_EQ(o.code, cli::ok) << o.err;
    const io::CurveFile c = io::read_curve_file(path("c.json"));
    const io::CurveFile s = io::read_curve_file(path("s.json"));
    EXPECT_LT((c.theta - s.theta).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(std::abs(s.params.kappa), 1e-12);
}

TEST_F(CliTest, SolveWithSmallDensityAndGravity)
{
    const Outcome o = run({"solve", "--A", "0.3", "--eps", "1e-3", "--g", "1e-3", "--n", "256", "--out", path("s.json")});
    ASSERT_EQ(o.code, cli::ok) << o.err;
    const json j = json::parse(o.out);
    EXPECT_TRUE(j.at("converged").get<bool>());
    EXPECT_LT(j.at("residual").at("G1").get<double>(), 1e-10);
    EXPECT_LT(j.at("residual").at("G2").get<double>(), 1e-10);
    EXPECT_TRUE(io::revalidate(io::read_curve_file(path("s.json"))).consistent);
    // a second run seeded from the result lands on the same state
    const Outcome again = run({"solve", "--A", "0.3", "--eps", "1e-3", "--g", "1e-3", "--n", "256", "--seed",
                               path("s.json"), "--out", path("t.json")});
    ASSERT_EQ(again.code, cli::ok) << again.err;
    EXPECT_LT((io::read_curve_file(path("s.json")).theta - io::read_curve_file(path("t.json")).theta)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
}

TEST_F(CliTest, FailedSolveKeepsLastGoodState)
{
    // at n = 128 the residual floor sits just above 1e-10 once g is of order one
    const Outcome o = run({"solve", "--A", "0.3", "--g", "50", "--n", "128", "--out", path("s.json")});
    EXPECT_EQ(o.code, cli::numerical_failure);
    EXPECT_FALSE(std::filesystem::exists(path("s.json")));
    const std::string side = cli::sidecar_path(path("s.json"));
    ASSERT_TRUE(std::filesystem::exists(side));
    const io::CurveFile last = io::read_curve_file(side);
    EXPECT_GT(last.params.g, 0.0);
    EXPECT_LT(last.params.g, 50.0);
    EXPECT_NE(o.err.find(side), std::string::npos);
}

TEST_F(CliTest, SolveRejectsInvalidInput)
{
    EXPECT_EQ(run({"solve", "--A", "0.3", "--eps", "-1", "--out", path("s.json")}).code, cli::usage_error);
    EXPECT_EQ(run({"solve", "--A", "0.3", "--tol", "0", "--out", path("s.json")}).code, cli::usage_error);
    EXPECT_EQ(run({"solve", "--A", "0.3", "--seed", path("none.json"), "--out", path("s.json")}).code,
              cli::usage_error);
}

TEST_F(CliTest, SplashFindArgumentChecks)
{
    // eps > 0 has no splash endpoint; only the eta-target mode is meaningful
    EXPECT_EQ(run({"splash-find", "--eps", "0.1", "--out", path("s.json")}).code, cli::usage_error);
    EXPECT_EQ(run({"splash-find", "--eta", "1.5", "--out", path("s.json")}).code, cli::usage_error);
    EXPECT_EQ(run({"splash-find", "--lo", "0.40", "--hi", "0.42", "--n", "256", "--out", path("s.json")}).code,
              cli::numerical_failure);
}

TEST_F(CliTest, SplashFindPureCapillary)
{
    const Outcome o = run({"splash-find", "--n", "512", "--out", path("s.json")});
    ASSERT_EQ(o.code, cli::ok) << o.err;
    const json j = json::parse(o.out);
    EXPECT_NEAR(j.at("A").get<double>(), crapper::critical_constants().a_splash, 1e-8);
    EXPECT_EQ(io::read_curve_file(path("s.json")).diagnostics.classification, geometry::CurveClass::splash);
}

TEST_F(CliTest, SolveNearSplashWithGravity)
{
    const Outcome o = run({"solve", "--A", "0.44", "--g", "1e-3", "--out", path("s.json")});
    ASSERT_EQ(o.code, cli::ok) << o.err;
    const json j = json::parse(o.out);
    EXPECT_TRUE(j.at("converged").get<bool>());
    EXPECT_LT(j.at("residual").at("G1").get<double>(), 1e-10);
    EXPECT_LT(j.at("residual").at("G2").get<double>(), 1e-10);
    EXPECT_TRUE(io::revalidate(io::read_curve_file(path("s.json"))).consistent);
}

TEST_F(CliTest, SplashFindWithGravity)
{
    const Outcome o = run({"splash-find", "--g", "1e-3", "--out", path("s.json")});
    ASSERT_EQ(o.code, cli::ok) << o.err;
    const json j = json::parse(o.out);
    EXPECT_LT(j.at("report").at("eta").get<double>(), 1e-6);
    EXPECT_LT(j.at("A").get<double>(), crapper::critical_constants().a_splash);
}

TEST_F(CliTest, SplashFindEtaTarget)
{
    const Outcome o = run({"splash-find", "--eps", "1e-3", "--g", "1e-3", "--eta", "0.05", "--out", path("s.json")});
    ASSERT_EQ(o.code, cli::ok) << o.err;
    const json j = json::parse(o.out);
    const double eta = j.at("report").at("eta").get<double>();
    EXPECT_GE(eta, 0.04);
    EXPECT_LE(eta, 0.06);
    const io::CurveFile f = io::read_curve_file(path("s.json"));
    EXPECT_EQ(f.params.eps, 1e-3);
    EXPECT_TRUE(io::revalidate(f).consistent);
}

TEST_F(CliTest, FieldOnASmallGrid)
{
    ASSERT_EQ(run({"crapper", "--A", "0", "--n", "64", "--out", path("flat.json")}).code, cli::ok);
    const Outcome o = run({"field", "--state", path("flat.json"), "--grid", "-1:1:3,-3:3:3", "--out", path("f.csv")});
    ASSERT_EQ(o.code, cli::ok) << o.err;
    // the middle row lies on the interface and is excluded
    EXPECT_EQ(json::parse(o.out).at("points"), 6);
    std::istringstream is(slurp(path("f.csv")));
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "x,y,u,v,psi");
    int rows = 0;
    while (std::getline(is, line)) {
        double x, y, u, v, psi;
        char c;
        std::istringstream ls(line);
        ls >> x >> c >> y >> c >> u >> c >> v >> c >> psi;
        EXPECT_NEAR(u, y < 0 ? 1.0 : -1.0, 1e-12) << line;
        EXPECT_NEAR(v, 0.0, 1e-12) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 6);
    EXPECT_EQ(run({"field", "--state", path("flat.json"), "--grid", "bad", "--out", path("g.csv")}).code,
              cli::usage_error);
    EXPECT_EQ(run({"field", "--state", path("none.json"), "--grid", "0:1:2,0:1:2", "--out", path("g.csv")}).code,
              cli::usage_error);
}

TEST(Cli, ValidateQuickPasses)
{
    const Outcome o = run({"validate", "--level", "quick"});
    EXPECT_EQ(o.code, cli::ok) << o.out << o.err;
    EXPECT_NE(o.out.find("5/5"), std::string::npos) << o.out;
}
