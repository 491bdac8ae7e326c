#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "optsched/cli.hpp"
#include "optsched/config.hpp"
#include "optsched/csv.hpp"
#include "optsched/presets.hpp"
#include "optsched/sweep.hpp"

using namespace optsched;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("optsched_test_" + std::to_string(std::rand()) +
                std::to_string(reinterpret_cast<uintptr_t>(this) & 0xffff));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct CaptureStdout {
    std::stringstream captured;
    std::streambuf* saved;
    CaptureStdout() : saved(std::cout.rdbuf(captured.rdbuf())) {}
    ~CaptureStdout() { std::cout.rdbuf(saved); }
};

ExperimentConfig sample_config() {
    ExperimentConfig config;
    config.params.n = 4;
    config.params.delta_r = 5;
    config.params.horizon = 2000;
    config.params.warmup = 500;
    config.params.seed = 3;
    config.policy = PolicySpec::adaptive(PolicySpec::max_weight(),
                                         HysteresisFn::power_law(0.1, 0.01));
    config.traffic.kind = TrafficSpec::Kind::uniform;
    config.traffic.rho = 0.6;
    config.seeds = {1, 2};
    config.sweep.rho = {0.3, 0.6};
    config.output = "out";
    return config;
}

std::string strip_wall_ms(const std::string& csv) {
    std::string result;
    std::stringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
        const size_t cut = line.rfind(',');
        result += line.substr(0, cut);
        result += '\n';
    }
    return result;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
    const ExperimentConfig config = sample_config();
    const std::string text = serialize_config(config);
    const ExperimentConfig parsed = parse_config(text);
    CHECK(parsed == config);
    CHECK(serialize_config(parsed) == text);
}

TEST_CASE("config errors carry field context") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("{}"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"params":{"n":4,"horizon":10},
                         "policy":{"kind":"warp"},
                         "traffic":{"kind":"uniform","rho":0.5}})"),
        doctest::Contains("policy"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"params":{"n":4,"horizon":10},
                                     "policy":{"kind":"max_weight"},
                                     "traffic":{"kind":"uniform","rho":1.5}})"),
                    ConfigError);
}

TEST_CASE("sweep expansion is the cartesian product in axis order") {
    const ExperimentConfig config = sample_config();
    const std::vector<SweepPoint> points = expand_sweep(config);
    REQUIRE(points.size() == 4);  // 2 rho values x 2 seeds
    CHECK(points[0].traffic.rho == 0.3);
    CHECK(points[0].params.seed == 1);
    CHECK(points[1].traffic.rho == 0.3);
    CHECK(points[1].params.seed == 2);
    CHECK(points[2].traffic.rho == 0.6);
    CHECK(points[3].params.seed == 2);
    for (const SweepPoint& point : points) {
        CHECK(point.delta.has_value());  // adaptive policy echoes its g parameters
        CHECK(*point.delta == 0.01);
    }
}

TEST_CASE("sweep without axes is rejected") {
    ExperimentConfig config = sample_config();
    config.sweep = {};
    CHECK_THROWS_AS(expand_sweep(config), ConfigError);
}

TEST_CASE("sweep rows are independent of the parallelism level") {
    ExperimentConfig config = sample_config();
    config.params.horizon = 400;
    config.params.warmup = 100;
    const SweepOutcome serial = execute_sweep(config, 1);
    const SweepOutcome parallel = execute_sweep(config, 4);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    std::string a = kSweepCsvHeader, b = kSweepCsvHeader;
    for (size_t i = 0; i < serial.rows.size(); ++i) {
        a += sweep_row_csv(serial.rows[i]);
        b += sweep_row_csv(parallel.rows[i]);
    }
    CHECK(strip_wall_ms(a) == strip_wall_ms(b));
}

TEST_CASE("cmd_match prints the assignment and total") {
    TempDir dir;
    write_matrix_csv(dir.file("m.csv"), {{0, 5, 1}, {2, 0, 3}, {4, 2, 0}});
    CaptureStdout capture;
    const int code = cli::cmd_match(dir.file("m.csv"));
    CHECK(code == cli::kExitOk);
    CHECK(capture.captured.str() == "2 3 1\n12\n");
}

TEST_CASE("cmd_match handles the degenerate cases") {
    TempDir dir;
    write_matrix_csv(dir.file("one.csv"), {{7}});
    {
        CaptureStdout capture;
        CHECK(cli::cmd_match(dir.file("one.csv")) == cli::kExitOk);
        CHECK(capture.captured.str() == "1\n7\n");
    }
    write_matrix_csv(dir.file("zeros.csv"), {{0, 0}, {0, 0}});
    {
        CaptureStdout capture;
        CHECK(cli::cmd_match(dir.file("zeros.csv")) == cli::kExitOk);
        const std::string out = capture.captured.str();
        CHECK(out.substr(out.size() - 2) == "0\n");
    }
    std::ofstream bad(dir.file("bad.csv"));
    bad << "1,2\n3,nope\n";
    bad.close();
    CHECK(cli::cmd_match(dir.file("bad.csv")) == cli::kExitConfigError);
}

TEST_CASE("cmd_decompose on a permutation matrix emits a single unit term") {
    TempDir dir;
    write_matrix_csv(dir.file("perm.csv"), {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    CaptureStdout capture;
    const int code = cli::cmd_decompose(dir.file("perm.csv"), std::nullopt, "");
    CHECK(code == cli::kExitOk);
    const std::string out = capture.captured.str();
    CHECK(out.find("terms=1") != std::string::npos);
    CHECK(out.find("1,2,3,1\n") != std::string::npos);  // alpha=1, dsts 2 3 1
}

TEST_CASE("cmd_decompose rejects bad input") {
    TempDir dir;
    std::ofstream rect(dir.file("rect.csv"));
    rect << "1,2,3\n4,5,6\n";
    rect.close();
    CHECK(cli::cmd_decompose(dir.file("rect.csv"), std::nullopt, "") ==
          cli::kExitConfigError);
    write_matrix_csv(dir.file("neg.csv"), {{1, -1}, {0, 1}});
    CHECK(cli::cmd_decompose(dir.file("neg.csv"), std::nullopt, "") ==
          cli::kExitConfigError);
}

TEST_CASE("cmd_run writes metrics and is deterministic") {
    TempDir dir;
    ExperimentConfig config = sample_config();
    config.params.horizon = 3000;
    config.params.warmup = 500;
    config.params.trace = true;
    config.sweep = {};
    std::ofstream out(dir.file("config.json"));
    out << serialize_config(config);
    out.close();

    cli::RunArgs args;
    args.config_path = dir.file("config.json");
    args.out_dir = dir.file("out1");
    {
        CaptureStdout capture;
        REQUIRE(cli::cmd_run(args) == cli::kExitOk);
        CHECK(capture.captured.str().find("mean_queue_length=") != std::string::npos);
    }
    args.out_dir = dir.file("out2");
    {
        CaptureStdout capture;
        REQUIRE(cli::cmd_run(args) == cli::kExitOk);
    }
    CHECK(read_file(dir.file("out1") + "/metrics.csv") ==
          read_file(dir.file("out2") + "/metrics.csv"));
    CHECK(read_file(dir.file("out1") + "/trace.csv") ==
          read_file(dir.file("out2") + "/trace.csv"));
    CHECK_FALSE(read_file(dir.file("out1") + "/trace.csv").empty());
}

TEST_CASE("cmd_run reports a zero-traffic network as empty") {
    TempDir dir;
    write_matrix_csv(dir.file("rates.csv"), {{0, 0}, {0, 0}});
    ExperimentConfig config;
    config.params.n = 2;
    config.params.horizon = 500;
    config.policy = PolicySpec::max_weight();
    config.traffic.kind = TrafficSpec::Kind::csv;
    config.traffic.path = dir.file("rates.csv");
    std::ofstream out(dir.file("config.json"));
    out << serialize_config(config);
    out.close();

    cli::RunArgs args;
    args.config_path = dir.file("config.json");
    args.out_dir = dir.file("out");
    CaptureStdout capture;
    REQUIRE(cli::cmd_run(args) == cli::kExitOk);
    CHECK(capture.captured.str().find("mean_queue_length=0 ") != std::string::npos);
}

TEST_CASE("cmd_run exit codes") {
    cli::RunArgs args;
    args.config_path = "/nonexistent/config.json";
    CHECK(cli::cmd_run(args) == cli::kExitConfigError);

    TempDir dir;
    write_matrix_csv(dir.file("hot.csv"), {{0, 0.7}, {0.7, 0}});
    ExperimentConfig config;
    config.params.n = 2;
    config.params.horizon = 100;
    config.policy = PolicySpec::max_weight();
    config.traffic.kind = TrafficSpec::Kind::csv;
    config.traffic.path = dir.file("hot.csv");
    std::ofstream out(dir.file("config.json"));
    // Force an inadmissible load by doubling the column sums.
    write_matrix_csv(dir.file("hot.csv"), {{0, 1.0}, {1.0, 0}});
    out << serialize_config(config);
    out.close();
    args.config_path = dir.file("config.json");
    args.out_dir = dir.file("out");
    CHECK(cli::cmd_run(args) == cli::kExitRuntimeFailure);
}

TEST_CASE("presets are discoverable and parseable") {
    const std::string dir = presets_directory();
    const std::vector<PresetInfo> presets = list_presets(dir);
    REQUIRE_FALSE(presets.empty());
    bool found_fig2 = false;
    for (const PresetInfo& info : presets) {
        const ExperimentConfig config = load_config(info.path);  // must parse
        CHECK_FALSE(config.description.empty());
        if (info.name == "fig2-desk") found_fig2 = true;
    }
    CHECK(found_fig2);
    CHECK_FALSE(find_preset("fig2-desk", dir).empty());
    CHECK_THROWS_AS(find_preset("no-such-preset", dir), ConfigError);
}

TEST_CASE("csv matrix io round-trips") {
    TempDir dir;
    const std::vector<std::vector<double>> rows = {{0, 0.25, 0.5}, {0.125, 0, 0}, {1, 2, 3}};
    write_matrix_csv(dir.file("m.csv"), rows);
    CHECK(read_matrix_csv(dir.file("m.csv")) == rows);
}
