#include "doctest.h"

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("fracbound_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const json& j) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FRACBOUND_EXE) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else cell += c;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

const json kLine = {{"sides", {3.141592653589793}}};
const json kHalf = {{"atoms", {{{"beta", 0.5}, {"scale", 1.0}}}}};
const json kSin = {{"type", "eigenmode"}, {"index", {1}}, {"normalized", false}};

}  // namespace

TEST_CASE("eval-h writes h = 1 at t = 0") {
    const auto dir = scratch("evalh");
    const auto cfg = write_config(dir, {{"measure", kHalf}, {"t", {0.0, 1.0}}, {"lambda", {1.0, 4.0}}});
    REQUIRE(run_cli("eval-h --config " + cfg.string() + " --out " + dir.string()) == 0);
    const auto rows = read_csv(dir / "h.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"t", "lambda", "h", "route", "est_error"});
    CHECK(rows[1][2] == "1");
    CHECK(rows[2][2] == "1");
    CHECK(rows[3][3] == "mittag-leffler");
    CHECK(std::stod(rows[3][2]) == doctest::Approx(0.42758357615580705).epsilon(1e-14));
    const json diag = json::parse(slurp(dir / "diagnostics.json"));
    CHECK(diag["command"] == "eval-h");
    CHECK(diag["status"] == "ok");
    CHECK(diag.contains("wall_time_seconds"));
    CHECK(diag["config"]["measure"] == kHalf);
}

TEST_CASE("solve-spectral with zero datum gives an all-zero field") {
    const auto dir = scratch("zero");
    const auto cfg = write_config(dir, {{"domain", kLine},
                                        {"initial", {{"type", "zero"}}},
                                        {"measure", kHalf},
                                        {"modes", 4},
                                        {"times", {0.0, 0.5}},
                                        {"points", {{"counts", {5}}}}});
    REQUIRE(run_cli("solve-spectral --config " + cfg.string() + " --out " + dir.string()) == 0);
    const auto rows = read_csv(dir / "solution.csv");
    CHECK(rows[0] == std::vector<std::string>{"t", "x", "u", "err"});
    REQUIRE(rows.size() == 11);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] == "0");
}

TEST_CASE("verify on the canonical single-atom config passes") {
    const auto dir = scratch("verify");
    REQUIRE(run_cli("verify --config " + std::string(FRACBOUND_CONFIGS) + "/verify.json --out " + dir.string()) == 0);
    const auto rows = read_csv(dir / "verify.csv");
    REQUIRE(rows.size() >= 7);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][4] == "pass");
}

TEST_CASE("usage and config errors exit 1") {
    const auto dir = scratch("errors");
    CHECK(run_cli("") == 1);
    CHECK(run_cli("frobnicate --config x.json") == 1);
    CHECK(run_cli("eval-h") == 1);
    CHECK(run_cli("eval-h --config " + (dir / "missing.json").string()) == 1);
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(run_cli("eval-h --config " + (dir / "broken.json").string() + " --out " + dir.string()) == 1);

    auto expect_config_error = [&](const json& j, const std::string& command) {
        const auto cfg = write_config(dir, j);
        fracbound::app::Invocation inv;
        inv.command = command;
        inv.config = cfg;
        inv.out = dir;
        CHECK_THROWS_AS(fracbound::app::run_command(inv), fracbound::app::ConfigError);
        CHECK(run_cli(command + " --config " + cfg.string() + " --out " + dir.string()) == 1);
    };
    // unknown key
    expect_config_error({{"measure", kHalf}, {"t", {1.0}}, {"lambda", {1.0}}, {"lamda", 2}}, "eval-h");
    // negative time
    expect_config_error({{"measure", kHalf}, {"t", {-1.0}}, {"lambda", {1.0}}}, "eval-h");
    // order outside (0, 1)
    expect_config_error({{"measure", {{"atoms", {{{"beta", 1.5}, {"weight", 1.0}}}}}}, {"t", {1.0}}, {"lambda", {1.0}}},
                        "eval-h");
    // stochastic command without a seed
    expect_config_error({{"domain", kLine}, {"initial", kSin}, {"measure", kHalf}, {"times", {1.0}},
                         {"points", {{1.5}}}, {"paths", 200}},
                        "solve-mc");
    // point on the boundary
    expect_config_error({{"domain", kLine}, {"initial", kSin}, {"measure", kHalf}, {"times", {1.0}},
                         {"points", {{0.0}}}, {"paths", 200}, {"seed", 1}},
                        "solve-mc");
    // both modes and target_tail
    expect_config_error({{"domain", kLine}, {"initial", kSin}, {"measure", kHalf}, {"modes", 3}, {"target_tail", 1e-6},
                         {"times", {1.0}}, {"points", {{1.0}}}},
                        "solve-spectral");
    // wrong point dimension
    expect_config_error({{"domain", kLine}, {"initial", kSin}, {"measure", kHalf}, {"modes", 3}, {"times", {1.0}},
                         {"points", {{1.0, 2.0}}}},
                        "solve-spectral");
}

TEST_CASE("failed verification exits 2") {
    const auto dir = scratch("fail");
    const auto cfg = write_config(dir, {{"domain", kLine}, {"initial", kSin}, {"measure", kHalf}, {"t", 1.0}, {"x", {1.5}},
                                        {"walkers", 200}, {"c", {10.0}}, {"reference_paths", 200}, {"z_max", 1e-9},
                                        {"seed", 3}});
    CHECK(run_cli("ctrw --config " + cfg.string() + " --out " + dir.string()) == 2);
    const json diag = json::parse(slurp(dir / "diagnostics.json"));
    CHECK(diag["status"] == "verification-failed");
}

TEST_CASE("diagnostics echo reproduces a stochastic run") {
    const auto dir = scratch("echo");
    const auto cfg = write_config(dir, {{"domain", kLine}, {"initial", kSin}, {"measure", kHalf}, {"times", {0.5}},
                                        {"points", {{1.0}, {2.0}}}, {"paths", 500}, {"euler_step", 0.01},
                                        {"subordinator_step", 0.01}});
    REQUIRE(run_cli("solve-mc --config " + cfg.string() + " --seed 12345 --threads 1 --out " + (dir / "a").string()) == 0);
    const json diag = json::parse(slurp(dir / "a" / "diagnostics.json"));
    CHECK(diag["seed"] == 12345);
    std::ofstream(dir / "echo.json") << diag["config"].dump();
    REQUIRE(run_cli("solve-mc --config " + (dir / "echo.json").string() + " --threads 4 --out " + (dir / "b").string()) == 0);
    CHECK(slurp(dir / "a" / "mc.csv") == slurp(dir / "b" / "mc.csv"));
    const auto rows = read_csv(dir / "a" / "mc.csv");
    CHECK(rows[0] == std::vector<std::string>{"t", "x", "mean", "se", "paths"});
    CHECK(rows.size() == 3);
}

TEST_CASE("sample-subordinator writes the Laplace table, g and paths") {
    const auto dir = scratch("sub");
    const auto cfg = write_config(dir, {{"components", {{{"beta", 0.5}, {"scale", 1.0}}}}, {"paths", 2000},
                                        {"step", 0.01}, {"export_paths", 3}, {"g", {{"t", 1.0}, {"bins", 20}}},
                                        {"seed", 4}});
    REQUIRE(run_cli("sample-subordinator --config " + cfg.string() + " --out " + dir.string()) == 0);
    const auto lap = read_csv(dir / "laplace.csv");
    REQUIRE(lap.size() == 4);
    for (std::size_t i = 1; i < lap.size(); ++i) CHECK(std::abs(std::stod(lap[i][4])) < 4.0);
    CHECK(read_csv(dir / "g.csv").size() == 21);
    CHECK(read_csv(dir / "paths.csv").size() == 1 + 3 * 101);
}

TEST_CASE("number formatting is shortest round-trip and locale free") {
    using fracbound::app::format_number;
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(std::stod(format_number(0.42758357615580705)) == 0.42758357615580705);
    CHECK(format_number(std::nan("")) == "nan");
}
