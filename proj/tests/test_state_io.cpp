#include "splash/crapper.hpp"
#include "splash/state_io.hpp"
#include "splash/system.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

using namespace splash;
using nlohmann::json;

namespace {

io::CurveFile sample_file(bool with_omega = true)
{
    return io::make_curve_file(system::crapper_state(0.3, 256, with_omega));
}

bool bit_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    if (a.size() != b.size())
        return false;
    for (Index i = 0; i < a.size(); ++i)
        if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0)
            return false;
    return true;
}

std::string edited(const io::CurveFile& f, const std::function<void(json&)>& edit)
{
    json j = json::parse(io::to_json_string(f));
    edit(j);
    return j.dump();
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("splash_io_" + name);
}

} // namespace

TEST(CurveFile, ContentsOfAFreshFile)
{
    const io::CurveFile f = sample_file();
    EXPECT_EQ(f.n, 256);
    ASSERT_TRUE(f.omega.has_value());
    EXPECT_EQ(f.diagnostics.classification, geometry::CurveClass::graph);
    EXPECT_EQ(f.diagnostics.intersections, 0);
    EXPECT_TRUE(f.diagnostics.converged);
    const json j = json::parse(io::to_json_string(f));
    EXPECT_EQ(j.at("schema"), "splash-curve");
    EXPECT_EQ(j.at("version"), 1);
    EXPECT_NEAR(j.at("params").at("q").get<double>(), crapper::q_of_A(0.3), 1e-15);
}

TEST(CurveFile, RoundTripIsBitExact)
{
    const io::CurveFile f = sample_file();
    const std::string text = io::to_json_string(f);
    const io::CurveFile g = io::from_json_string(text);
    EXPECT_TRUE(bit_equal(f.alpha, g.alpha));
    EXPECT_TRUE(bit_equal(f.x, g.x));
    EXPECT_TRUE(bit_equal(f.y, g.y));
    EXPECT_TRUE(bit_equal(f.theta, g.theta));
    EXPECT_TRUE(bit_equal(f.tau, g.tau));
    ASSERT_TRUE(g.omega.has_value());
    EXPECT_TRUE(bit_equal(*f.omega, *g.omega));
    EXPECT_EQ(f.diagnostics.eta, g.diagnostics.eta);
    EXPECT_EQ(f.params.A, g.params.A);
    EXPECT_EQ(io::to_json_string(g), text);
}

TEST(CurveFile, FileRoundTripAndReproducibleBytes)
{
    const auto p1 = temp_path("a.json");
    const auto p2 = temp_path("b.json");
    io::write_curve_file(p1.string(), sample_file());
    io::write_curve_file(p2.string(), sample_file());
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    EXPECT_EQ(slurp(p1), slurp(p2));
    const io::CurveFile back = io::read_curve_file(p1.string());
    EXPECT_TRUE(bit_equal(back.theta, sample_file().theta));
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
    EXPECT_THROW(io::read_curve_file(temp_path("missing.json").string()), io::FormatError);
}

TEST(CurveFile, NonFiniteDiagnosticsBecomeNull)
{
    io::CurveFile f = sample_file();
    f.diagnostics.eta = std::numeric_limits<double>::quiet_NaN();
    f.diagnostics.residual.G2 = std::numeric_limits<double>::infinity();
    const std::string text = io::to_json_string(f);
    const json j = json::parse(text);
    EXPECT_TRUE(j.at("diagnostics").at("eta").is_null());
    EXPECT_TRUE(j.at("diagnostics").at("residual").at("G2").is_null());
    const io::CurveFile g = io::from_json_string(text);
    EXPECT_TRUE(std::isnan(g.diagnostics.eta));
    EXPECT_TRUE(std::isnan(g.diagnostics.residual.G2));
}

TEST(CurveFile, MissingVorticityIsNull)
{
    const io::CurveFile f = sample_file(false);
    EXPECT_FALSE(f.omega.has_value());
    const std::string text = io::to_json_string(f);
    EXPECT_TRUE(json::parse(text).at("omega").is_null());
    const system::SolveState s = io::state_from_file(io::from_json_string(text));
    EXPECT_FALSE(s.has_omega);
    EXPECT_EQ(s.omega.values().minCoeff(), 2.0);
    EXPECT_EQ(s.omega.values().maxCoeff(), 2.0);
}

TEST(CurveFile, RejectsMalformedInput)
{
    const io::CurveFile f = sample_file();
    EXPECT_THROW(io::from_json_string("{not json"), io::FormatError);
    EXPECT_THROW(io::from_json_string("[]"), io::FormatError);
    EXPECT_THROW(io::from_json_string(edited(f, [](json& j) { j["schema"] = "other"; })), io::FormatError);
    EXPECT_THROW(io::from_json_string(edited(f, [](json& j) { j["version"] = 2; })), io::FormatError);
    EXPECT_THROW(io::from_json_string(edited(f, [](json& j) { j["n"] = 24; })), io::FormatError);
    EXPECT_THROW(io::from_json_string(edited(f, [](json& j) { j["x"].erase(0); })), io::FormatError);
    EXPECT_THROW(io::from_json_string(edited(f, [](json& j) { j["theta"][3] = "a"; })), io::FormatError);
    EXPECT_THROW(io::from_json_string(edited(f, [](json& j) { j.erase("params"); })), io::FormatError);
    EXPECT_THROW(io::from_json_string(edited(f, [](json& j) { j["params"]["A"] = 1.5; })), io::FormatError);
    EXPECT_THROW(io::from_json_string(edited(f, [](json& j) { j["diagnostics"]["classification"] = "wavy"; })),
                 io::FormatError);
}

TEST(CurveFile, StateFromFileChecksParity)
{
    io::CurveFile f = sample_file();
    f.theta[0] = 0.1; // odd samples vanish at alpha = 0
    EXPECT_THROW(io::state_from_file(f), io::FormatError);
    const system::SolveState s = io::state_from_file(sample_file());
    EXPECT_EQ(s.theta.parity(), Parity::odd);
    EXPECT_EQ(s.omega.parity(), Parity::even);
    EXPECT_TRUE(s.has_omega);
}

TEST(Revalidate, FreshFileIsConsistent)
{
    const io::Revalidation r = io::revalidate(sample_file());
    EXPECT_TRUE(r.consistent) << r.message;
    EXPECT_EQ(r.recomputed.classification, geometry::CurveClass::graph);
}

TEST(Revalidate, DetectsTampering)
{
    io::CurveFile moved = sample_file();
    moved.x[10] += 1e-6;
    EXPECT_FALSE(io::revalidate(moved).consistent);

    io::CurveFile relabelled = sample_file();
    relabelled.diagnostics.classification = geometry::CurveClass::splash;
    relabelled.diagnostics.eta = 0.0;
    const io::Revalidation r = io::revalidate(relabelled);
    EXPECT_FALSE(r.consistent);
    EXPECT_NE(r.message.find("classification"), std::string::npos);
    EXPECT_NE(r.message.find("eta"), std::string::npos);

    io::CurveFile understated = sample_file();
    understated.diagnostics.residual.G2 = 0.0;
    understated.omega->array() += 1e-3;
    EXPECT_FALSE(io::revalidate(understated).consistent);
}

TEST(FieldCsv, HeaderAndFullPrecision)
{
    std::ostringstream os;
    io::write_field_csv(os, {{0.1, -2.0, 1.0 / 3.0, 0.0, -7.25}});
    EXPECT_EQ(os.str(), "x,y,u,v,psi\n0.10000000000000001,-2,0.33333333333333331,0,-7.25\n");
    std::istringstream is(os.str());
    std::string header, line;
    std::getline(is, header);
    std::getline(is, line);
    EXPECT_EQ(std::stod(line.substr(line.find(',', line.find(',') + 1) + 1)), 1.0 / 3.0);
}
