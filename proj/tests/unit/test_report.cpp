#include "uavran/report.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

using namespace uavran;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("uavran_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int cli(const std::string& args) {
    const int status = std::system((std::string(UAVRAN_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path data(const std::string& name) { return fs::path(UAVRAN_DATA_DIR) / name; }

StudyMetrics metrics_with(std::array<double, 4> harvest) {
    StudyMetrics m;
    const char* names[] = {"spring", "summer", "autumn", "winter"};
    for (std::size_t i = 0; i < 4; ++i) {
        m.seasons[i].season = names[i];
        m.seasons[i].date = "2022-01-0" + std::to_string(i + 1);
        m.seasons[i].total_harvest_wh = harvest[i];
        m.seasons[i].anuc_no_res = 9.0;
        m.seasons[i].anuc_with_res = 8.5;
    }
    return m;
}

} // namespace

TEST(Summary, MeanRowIsExactMeanOfPrintedValues) {
    const auto csv = summary_csv(metrics_with({249.543, 539.087, 239.764, 29.741}));
    std::istringstream in(csv);
    std::string header, line, last;
    std::getline(in, header);
    EXPECT_EQ(header, "season,date,harvest_no_res_wh,harvest_pv_wh,peak_no_res_w,peak_pv_w,arec_no_res_percent,"
                      "arec_pv_percent,anuc_no_res,anuc_pv");
    std::getline(in, line);
    EXPECT_EQ(line, "spring,2022-01-01,0.00,249.54,0.00,0.00,0.00,0.00,9.00,8.50");
    while (std::getline(in, line)) last = line;
    // (249.54 + 539.09 + 239.76 + 29.74) / 4
    EXPECT_EQ(last, "mean,,0.00,264.5325,0.00,0.00,0.00,0.00,9.00,8.50");
}

TEST(Summary, NegativeAndHalfHundredths) {
    const auto csv = summary_csv(metrics_with({0.01, 0.0, 0.0, 0.01}));
    EXPECT_NE(csv.find("mean,,0.00,0.005,"), std::string::npos) << csv;
}

TEST(Study, SeedsAndWorkerCountDoNotChangeResults) {
    auto s = default_scenario();
    s.user_count = 20;
    StudyOptions one{.runs = 3, .seed = 7, .weather_csv = {}, .keep_ledgers = false, .jobs = 1};
    StudyOptions many = one;
    many.jobs = 3;
    const auto a = run_study(s, one);
    const auto b = run_study(s, many);
    EXPECT_EQ(a.seeds, (std::vector<std::uint64_t>{7, 8, 9}));
    EXPECT_EQ(summary_csv(a.metrics), summary_csv(b.metrics));
    EXPECT_EQ(metrics_json(s, a, one, {}).dump(), metrics_json(s, b, one, {}).dump());
}

TEST(Cli, MissingConfigIsUsageError) {
    EXPECT_EQ(cli("simulate"), 2);
    EXPECT_EQ(cli("simulate --config /nonexistent.json"), 2);
    EXPECT_EQ(cli("frobnicate"), 2);
}

TEST(Cli, UnknownConfigKeyIsUsageErrorAndLeavesNoOutput) {
    const auto dir = scratch("badcfg");
    std::ofstream(dir / "cfg.json") << R"({"user_cuont": 3})";
    EXPECT_EQ(cli("simulate --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string()), 2);
    EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Cli, SimulateIsByteIdentical) {
    const auto dir = scratch("determinism");
    std::ofstream(dir / "cfg.json") << R"({"user_count": 20, "run_count": 2})";
    const auto cfg = (dir / "cfg.json").string();
    ASSERT_EQ(cli("simulate --config " + cfg + " --out " + (dir / "a").string() + " --jobs 1"), 0);
    ASSERT_EQ(cli("simulate --config " + cfg + " --out " + (dir / "b").string() + " --jobs 2"), 0);
    for (const char* f : {"metrics.json", "summary.csv", "timeseries_summer.csv", "ledger_1_pv.csv"}) {
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
    const auto j = nlohmann::json::parse(slurp(dir / "a" / "metrics.json"));
    EXPECT_EQ(j["seeds"], nlohmann::json({42, 43}));
    EXPECT_EQ(j["ledger_files"].size(), 4u);
}

TEST(Cli, SimulateWithWeatherFile) {
    const auto dir = scratch("weatherfile");
    std::ofstream(dir / "cfg.json") << R"({"user_count": 5, "run_count": 1})";
    const auto s = default_scenario();
    {
        std::ofstream out(dir / "w.csv");
        write_weather_csv(synth_study_weather(s, 42), out);
    }
    const auto cfg = (dir / "cfg.json").string();
    ASSERT_EQ(cli("simulate --config " + cfg + " --weather " + (dir / "w.csv").string() + " --out " +
                  (dir / "a").string()),
              0);
    ASSERT_EQ(cli("simulate --config " + cfg + " --out " + (dir / "b").string()), 0);
    EXPECT_EQ(slurp(dir / "a" / "summary.csv"), slurp(dir / "b" / "summary.csv"));

    std::ofstream(dir / "short.csv") << "timestamp,ghi_wm2,temp_c\n2022-03-20T00:00,0,1\n";
    EXPECT_EQ(cli("simulate --config " + cfg + " --weather " + (dir / "short.csv").string() + " --out " +
                  (dir / "c").string()),
              2);
}

TEST(Cli, WeatherSynth) {
    const auto dir = scratch("synth");
    const auto out = dir / "day.csv";
    ASSERT_EQ(cli("weather-synth --date 2022-06-21 --cloud 1 --out " + out.string()), 0);
    std::ifstream in(out);
    const auto w = read_weather_csv(in);
    ASSERT_EQ(w.samples.size(), 1440u);
    EXPECT_NEAR(w.samples[720].ghi_wm2, 857.1367377767798, 1e-6);
    EXPECT_EQ(cli("weather-synth --date 2022-02-30 --out " + out.string()), 2);
    EXPECT_EQ(cli("weather-synth --date 2022-06-21 --cloud 2 --out " + out.string()), 2);
}

TEST(Cli, Oracle) {
    EXPECT_EQ(cli("oracle --instance " + data("oracle_2node_4user.json").string()), 0);
    EXPECT_EQ(cli("oracle --daily-wh 6550 --usable-wh 724.85"), 0);
    EXPECT_EQ(cli("oracle"), 2);
    const auto dir = scratch("oracle");
    std::ofstream(dir / "empty.json") << R"({"nodes": [], "users": []})";
    EXPECT_EQ(cli("oracle --instance " + (dir / "empty.json").string()), 0);
    std::string big = R"({"nodes": [)";
    for (int i = 0; i < 5; ++i) big += (i ? "," : "") + std::string(R"({"id":)") + std::to_string(i) + R"(,"x":0,"y":0})";
    big += R"(], "users": []})";
    std::ofstream(dir / "big.json") << big;
    EXPECT_EQ(cli("oracle --instance " + (dir / "big.json").string()), 2);
}

TEST(Cli, CloudZeroGivesDarkDay) {
    const auto dir = scratch("cloud0");
    ASSERT_EQ(cli("weather-synth --date 2022-06-21 --cloud 0 --out " + (dir / "d.csv").string()), 0);
    std::ifstream in(dir / "d.csv");
    for (const auto& s : read_weather_csv(in).samples) EXPECT_EQ(s.ghi_wm2, 0.0);
}

TEST(Cli, ExampleRunShapeAndRepeatability) {
    const auto dir = scratch("example");
    const auto cfg = data("example_scenario.json").string();
    const auto base = "simulate --config " + cfg + " --runs 1 --seed 7 --out ";
    ASSERT_EQ(cli(base + (dir / "a").string()), 0);
    ASSERT_EQ(cli(base + (dir / "b").string()), 0);
    for (const char* f : {"metrics.json", "summary.csv", "ledger_0_pv.csv", "timeseries_winter.csv"}) {
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }

    std::istringstream summary(slurp(dir / "a" / "summary.csv"));
    std::vector<std::string> rows;
    for (std::string line; std::getline(summary, line);) rows.push_back(line);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[5].rfind("mean,", 0), 0u);

    const auto j = nlohmann::json::parse(slurp(dir / "a" / "metrics.json"));
    std::function<void(const nlohmann::json&)> finite = [&](const nlohmann::json& v) {
        if (v.is_number()) EXPECT_TRUE(std::isfinite(v.get<double>()));
        if (v.is_structured()) {
            for (const auto& x : v) finite(x);
        }
    };
    finite(j);
    for (const auto& s : j["seasons"]) {
        EXPECT_GE(s["arec_percent"].get<double>(), 0.0);
        EXPECT_LE(s["arec_percent"].get<double>(), 100.0);
        EXPECT_GE(s["anuc_no_res"].get<double>(), 0.0);
        EXPECT_GE(s["anuc_with_res"].get<double>(), 0.0);
    }
}
