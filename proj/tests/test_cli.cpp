#include <gtest/gtest.h>

#include <complex>
#include <filesystem>
#include <algorithm>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "vortexflow/cli.hpp"

namespace fs = std::filesystem;
namespace cli = vortexflow::cli;
namespace io = vortexflow::io;
using json = nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("vortexflow_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "vortexflow");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return cli::run(static_cast<int>(argv.size()), argv.data());
    }

    fs::path write_config(const std::string& name, const json& j) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << j.dump();
        return p;
    }

    static std::vector<std::string> lines(const fs::path& p) {
        std::ifstream in(p);
        std::vector<std::string> out;
        for (std::string l; std::getline(in, l);) out.push_back(l);
        return out;
    }

    fs::path dir_;
};

}  // namespace

TEST(NamedCases, MatchTheInitialConfigurationTable) {
    EXPECT_EQ(cli::named_case("1").positions[1], (vortexflow::Vec2{0.5, 0.0}));
    EXPECT_EQ(cli::named_case("2").degrees, (std::vector<int>{1, 1, -1}));
    EXPECT_EQ(cli::named_case("3").positions[0], (vortexflow::Vec2{-0.75, 0.0}));
    EXPECT_EQ(cli::named_case("4").degrees, (std::vector<int>{1, -1, 1, -1}));
    EXPECT_EQ(cli::named_case("4").positions[2], (vortexflow::Vec2{0.6, 0.6}));
    EXPECT_EQ(cli::named_case("dipole", 0.2).positions[0], (vortexflow::Vec2{-0.2, 0.0}));
    EXPECT_THROW(cli::named_case("5"), vortexflow::ConfigError);
}

TEST(ParseConfig, DefaultsAndValidation) {
    const auto rc = cli::parse_config(json{{"case", 1}});
    EXPECT_EQ(rc.m, 64);
    EXPECT_DOUBLE_EQ(rc.dt, 1e-3);
    EXPECT_EQ(rc.grid.nx, 512);
    EXPECT_EQ(rc.echo["case"], 1);
    EXPECT_THROW(cli::parse_config(json{{"case", 1}, {"bogus", 2}}), vortexflow::ConfigError);
    EXPECT_FALSE(cli::parse_config(json::object()).has_vortices);  // enough for the profile command
    EXPECT_THROW(cli::parse_config(json{{"positions", json::array()}}), vortexflow::ConfigError);
    EXPECT_THROW(cli::parse_config(json{{"case", 1}, {"dt", -1.0}}), vortexflow::ConfigError);
    EXPECT_THROW(cli::parse_config(json{{"case", 1}, {"m", 2.5}}), vortexflow::ConfigError);
    EXPECT_THROW(cli::parse_config(json{{"case", 1}, {"alpha0", 0.0}, {"beta0", 0.0}}), vortexflow::ConfigError);
    EXPECT_THROW(cli::parse_config(json{{"positions", {{0.0, 0.0}}}, {"degrees", {2}}}), vortexflow::ConfigError);
    EXPECT_THROW(cli::parse_config(json{{"positions", {{1.2, 0.0}}}, {"degrees", {1}}}), vortexflow::ConfigError);
    EXPECT_THROW(cli::parse_config(json{{"case", 1}, {"positions", {{0.0, 0.0}}}, {"degrees", {1}}}),
                 vortexflow::ConfigError);
    const auto empty = cli::parse_config(json{{"positions", json::array()}, {"degrees", json::array()}});
    EXPECT_TRUE(empty.has_vortices);
    EXPECT_EQ(empty.vortices.size(), 0u);
}

TEST_F(CliTest, TrajectoryOfNamedCase) {
    const fs::path out = dir_ / "traj";
    ASSERT_EQ(run({"trajectory", "--case", "1", "--h-ex", "3", "--out", out.string()}), 0);
    const auto rows = lines(out / "trajectory.csv");
    ASSERT_EQ(rows.size(), 1002u);  // header + 1001 steps
    EXPECT_EQ(rows[0], "t,x1,y1,x2,y2");
    EXPECT_EQ(rows[1], "0,-0.5,0,0.5,0");
    EXPECT_EQ(lines(out / "energy.csv").size(), 1002u);
    const json meta = json::parse(io::read_file(out / "meta.json"));
    EXPECT_EQ(meta["termination"], "completed");
    EXPECT_EQ(meta["version"], cli::kVersion);
    EXPECT_EQ(meta["config"]["h_ex"], 3.0);
    EXPECT_TRUE(meta.contains("wall_time_s"));
    EXPECT_EQ(meta["arc_lengths"].size(), 2u);
}

TEST_F(CliTest, StationaryVortexRowsAreIdentical) {
    const fs::path out = dir_ / "still";
    ASSERT_EQ(run({"trajectory", "--positions", "[[0,0]]", "--degrees", "1", "--T", "0.05", "--dt", "0.01", "--m", "16",
                   "--out", out.string()}),
              0);
    const auto rows = lines(out / "trajectory.csv");
    ASSERT_EQ(rows.size(), 7u);
    // Spectral roundoff moves the centred vortex by at most a few 1e-18.
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto cols = io::detail::split(rows[i], ',');
        ASSERT_EQ(cols.size(), 3u);
        EXPECT_NEAR(std::stod(cols[1]), 0.0, 1e-15);
        EXPECT_NEAR(std::stod(cols[2]), 0.0, 1e-15);
    }
}

TEST_F(CliTest, ConfigEchoReproducesOutputsByteForByte) {
    const fs::path first = dir_ / "first";
    const fs::path cfg = write_config("c.json", json{{"case", 2}, {"h_ex", -2.0}, {"T", 0.05}, {"m", 32}});
    ASSERT_EQ(run({"trajectory", "--config", cfg.string(), "--out", first.string()}), 0);
    const json meta = json::parse(io::read_file(first / "meta.json"));
    json echo = meta["config"];
    const fs::path second = dir_ / "second";
    echo["out"] = second.string();
    const fs::path cfg2 = write_config("echo.json", echo);
    ASSERT_EQ(run({"trajectory", "--config", cfg2.string()}), 0);
    EXPECT_EQ(io::read_file(first / "trajectory.csv"), io::read_file(second / "trajectory.csv"));
    EXPECT_EQ(io::read_file(first / "energy.csv"), io::read_file(second / "energy.csv"));
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run({"trajectory", "--config", (dir_ / "missing.json").string()}), 4);
    const fs::path bad = write_config("bad.json", json{{"case", 1}, {"dt", "fast"}});
    EXPECT_EQ(run({"trajectory", "--config", bad.string(), "--out", (dir_ / "x").string()}), 2);
    EXPECT_EQ(run({"trajectory", "--out", (dir_ / "x").string()}), 2);  // no vortex configuration
    EXPECT_EQ(run({"trajectory", "--case", "1", "--dt", "abc"}), 2);
    EXPECT_EQ(run({"nonsense"}), 2);
    {
        std::ofstream(dir_ / "broken.json") << "{ not json";
    }
    EXPECT_EQ(run({"trajectory", "--config", (dir_ / "broken.json").string()}), 2);
}

TEST_F(CliTest, GuardTerminationKeepsPartialOutput) {
    const fs::path out = dir_ / "guard";
    EXPECT_EQ(run({"trajectory", "--case", "3", "--alpha0", "1", "--beta0", "0", "--out", out.string()}), 3);
    const json meta = json::parse(io::read_file(out / "meta.json"));
    EXPECT_EQ(meta["termination"], "guard_boundary");
    EXPECT_LT(lines(out / "trajectory.csv").size(), 1002u);
    EXPECT_GT(lines(out / "trajectory.csv").size(), 2u);
}

TEST_F(CliTest, ProfileCacheRoundTripIsBitIdentical) {
    const fs::path out = dir_ / "prof";
    ASSERT_EQ(run({"profile", "--epsilon", "0.03", "--r0", "0.3", "--dr", "1e-5", "--out", out.string()}), 0);
    const auto original = vortexflow::solve_profile(0.03, 0.3, 1e-5);
    const auto loaded = io::load_profile(out / "profile.csv");
    EXPECT_EQ(loaded.values, original.values);
    EXPECT_EQ(loaded.epsilon, original.epsilon);
    EXPECT_EQ(loaded.dr, original.dr);
    EXPECT_EQ(run({"profile", "--epsilon", "0.001", "--r0", "0.1", "--dr", "1e-5", "--out", (dir_ / "p2").string()}), 0);
    EXPECT_EQ(run({"profile", "--epsilon", "0.03", "--dr", "0.01", "--out", (dir_ / "p3").string()}), 2);
}

TEST_F(CliTest, ConvergenceOfStationaryVortexIsExact) {
    const fs::path out = dir_ / "conv";
    ASSERT_EQ(run({"convergence", "--positions", "[[0,0]]", "--degrees", "[1]", "--mode", "m", "--m-list", "4,8",
                   "--T", "0.05", "--dt", "0.01", "--out", out.string()}),
              0);
    const auto rows = lines(out / "convergence.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1], "4,0");
    EXPECT_EQ(rows[2], "8,0");
    const json meta = json::parse(io::read_file(out / "meta.json"));
    EXPECT_TRUE(meta["slope"].is_null());
}

TEST_F(CliTest, ReconstructWritesFieldsAndDetections) {
    const fs::path out = dir_ / "rec";
    ASSERT_EQ(run({"reconstruct", "--case", "1", "--h-ex", "3", "--nx", "128", "--ny", "128", "--times", "0,0.1",
                   "--out", out.string()}),
              0);
    ASSERT_TRUE(fs::exists(out / "fields_t0.csv"));
    ASSERT_TRUE(fs::exists(out / "fields_t0.1.csv"));
    const auto rows = lines(out / "fields_t0.csv");
    EXPECT_EQ(rows[0], "x,y,abs_u2,arg_u,h,j_x,j_y");
    const auto vort = lines(out / "vortices_t0.1.csv");
    ASSERT_EQ(vort.size(), 3u);
    EXPECT_EQ(vort[1].substr(vort[1].rfind(',')), ",1");
    const json meta = json::parse(io::read_file(out / "meta.json"));
    EXPECT_EQ(meta["frames"].size(), 2u);
}

TEST_F(CliTest, CoreWidthScalesWithEpsilon) {
    // With r0 proportional to epsilon the two cores are exact rescalings.
    auto half_width = [&](const char* eps, const char* r0) {
        const fs::path out = dir_ / (std::string("w") + eps);
        EXPECT_EQ(run({"reconstruct", "--positions", "[[0,0]]", "--degrees", "1", "--epsilon", eps, "--r0", r0, "--dr",
                       "1e-4", "--nx", "401", "--ny", "401", "--times", "0", "--out", out.string()}),
                  0);
        // Radius where |u|^2 crosses 1/2 along the positive x axis, by linear interpolation.
        std::vector<std::pair<double, double>> axis;
        for (const auto& row : lines(out / "fields_t0.csv")) {
            if (row[0] == 'x') continue;
            const auto cols = io::detail::split(row, ',');
            const double x = std::stod(cols[0]), y = std::stod(cols[1]);
            if (y == 0.0 && x >= 0.0) axis.emplace_back(x, std::stod(cols[2]));
        }
        std::sort(axis.begin(), axis.end());
        for (std::size_t k = 0; k + 1 < axis.size(); ++k) {
            const auto [x0, r0v] = axis[k];
            const auto [x1, r1v] = axis[k + 1];
            if (r0v < 0.5 && r1v >= 0.5) return x0 + (0.5 - r0v) / (r1v - r0v) * (x1 - x0);
        }
        return std::numeric_limits<double>::quiet_NaN();
    };
    const double narrow = half_width("0.05", "0.3");
    const double wide = half_width("0.13", "0.78");
    EXPECT_NEAR(wide / narrow, 0.13 / 0.05, 0.25);
}

TEST_F(CliTest, CompareAgainstItselfAndRotatedCopy) {
    const vortexflow::GridSpec spec{96, 96};
    const auto rc = cli::parse_config(json{{"case", 1}, {"h_ex", 3.0}, {"nx", 96}, {"ny", 96}});
    const auto profile = vortexflow::solve_profile(rc.epsilon, rc.r0, rc.dr);
    auto field = vortexflow::sample_fields(rc.vortices, 3.0, profile, 64, spec, {true, false, false, false});
    io::write_atomic(dir_ / "self.csv", io::field_to_csv(field));
    for (auto& v : field.u) v *= std::polar(1.0, 0.7);
    io::write_atomic(dir_ / "rotated.csv", io::field_to_csv(field));

    for (const char* name : {"self.csv", "rotated.csv"}) {
        const fs::path out = dir_ / (std::string("cmp_") + name);
        ASSERT_EQ(run({"compare", "--case", "1", "--h-ex", "3", "--nx", "96", "--ny", "96", "--external",
                       (dir_ / name).string(), "--out", out.string()}),
                  0);
        const json meta = json::parse(io::read_file(out / "meta.json"));
        EXPECT_LE(meta["errors"]["u"].get<double>(), 1e-13) << name;
        EXPECT_LE(meta["errors"]["abs_u2"].get<double>(), 1e-14) << name;
        EXPECT_EQ(meta["errors"]["h"].get<double>(), 0.0) << name;
        EXPECT_LE(meta["errors"]["j"].get<double>(), 1e-13) << name;
        EXPECT_EQ(meta["vortex_position_error"].get<double>(), 0.0) << name;
    }
    EXPECT_EQ(run({"compare", "--case", "1", "--nx", "64", "--ny", "64", "--external", (dir_ / "self.csv").string(),
                   "--out", (dir_ / "mismatch").string()}),
              2);
}

TEST_F(CliTest, CompareWithNoisyField) {
    const vortexflow::GridSpec spec{96, 96};
    const auto profile = vortexflow::solve_profile(0.03, 0.3, 1e-5);
    auto field = vortexflow::sample_fields(cli::named_case("1"), 0.0, profile, 64, spec, {true, false, false, false});
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (std::size_t k = 0; k < field.u.size(); ++k)
        if (field.mask[k]) field.u[k] += std::polar(1e-3, angle(gen));
    io::write_atomic(dir_ / "noisy.csv", io::field_to_csv(field));
    const fs::path out = dir_ / "cmp";
    ASSERT_EQ(run({"compare", "--case", "1", "--nx", "96", "--ny", "96", "--external", (dir_ / "noisy.csv").string(),
                   "--out", out.string()}),
              0);
    const json meta = json::parse(io::read_file(out / "meta.json"));
    // |noise| = 1e-3 everywhere; the reference has |u| close to 1 on most of the disk.
    const double e = meta["errors"]["u"].get<double>();
    EXPECT_GT(e, 0.8e-3);
    EXPECT_LT(e, 1.3e-3);
}

TEST(Io, AtomicWriteLeavesNoTemporaryFiles) {
    const fs::path dir = fs::temp_directory_path() / "vortexflow_io_atomic";
    fs::remove_all(dir);
    io::write_atomic(dir / "a.txt", "one");
    io::write_atomic(dir / "a.txt", "two");
    EXPECT_EQ(io::read_file(dir / "a.txt"), "two");
    int count = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++count;
    EXPECT_EQ(count, 1);
    fs::remove_all(dir);
    EXPECT_THROW(io::read_file(dir / "nope"), vortexflow::IoError);
}

TEST(Io, RealFormatRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(io::format_real(v)), v);
    EXPECT_EQ(io::format_real(0.5), "0.5");
}
