#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "misolab/cli.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = misolab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string golden(const std::string& name) { return slurp(std::filesystem::path(MISO_LAB_GOLDEN_DIR) / name); }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("format_number keeps ten significant digits") {
    CHECK(misolab::cli::format_number(14.972261851) == "14.97226185");
    CHECK(misolab::cli::format_number(3.0) == "3");
    CHECK(misolab::cli::format_number(1e-12) == "1e-12");
}

TEST_CASE("golden outputs") {
    const Outcome b = run({"bounds", "--m", "64", "--tc", "8", "--p", "10", "--kappa", "1"});
    CHECK(b.code == 0);
    CHECK(b.out == golden("bounds_m64_tc8_p10.csv"));

    const Outcome j = run({"bounds", "--m", "64", "--tc", "8", "--p", "10", "--format", "json"});
    CHECK(j.code == 0);
    CHECK(j.out == golden("bounds_m64_tc8_p10.json"));

    const Outcome d = run({"bounds", "--m", "64", "--tc", "1", "--p", "10"});
    CHECK(d.code == 0);
    CHECK(d.out == golden("bounds_m64_tc1_p10.csv"));

    const Outcome s = run({"sweep-alpha", "--alpha", "1", "--p", "1", "--m-list", "4,16", "--trials", "2000"});
    CHECK(s.code == 0);
    CHECK(s.out == golden("sweep_alpha1_p1_m4_16.csv"));

    const Outcome sim = run({"simulate", "--m", "16", "--tc", "8", "--p", "10", "--trials", "2000", "--seed", "7"});
    CHECK(sim.code == 0);
    CHECK(sim.out == golden("simulate_m16_tc8_p10_seed7.csv"));
}

TEST_CASE("bounds: csv and json carry the same numbers") {
    const Outcome c = run({"bounds", "--m", "32", "--tc", "6", "--p", "3", "--kappa", "0.7"});
    const Outcome j = run({"bounds", "--m", "32", "--tc", "6", "--p", "3", "--kappa", "0.7", "--format", "json"});
    REQUIRE(c.code == 0);
    REQUIRE(j.code == 0);
    const auto rows = parse_csv(c.out);
    REQUIRE(rows.size() == 2);
    const nlohmann::json obj = nlohmann::json::parse(j.out);

    // Schema: every CSV column is a JSON key, plus the versioning fields.
    CHECK(obj.at("schema_version") == misolab::cli::kSchemaVersion);
    CHECK(obj.at("command") == "bounds");
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
        const std::string& key = rows[0][i];
        const std::string& cell = rows[1][i];
        CAPTURE(key);
        REQUIRE(obj.contains(key));
        const auto& v = obj.at(key);
        if (v.is_boolean()) {
            CHECK(cell == (v.get<bool>() ? "true" : "false"));
        } else {
            REQUIRE(v.is_number());
            CHECK(std::stod(cell) == v.get<double>());
        }
    }
}

TEST_CASE("degenerate marker") {
    const Outcome d = run({"bounds", "--m", "8", "--tc", "1", "--p", "1"});
    const auto rows = parse_csv(d.out);
    REQUIRE(rows.size() == 2);
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
        if (rows[0][i].rfind("lower_", 0) == 0 || rows[0][i] == "t_tau") CHECK(rows[1][i] == "degenerate");
    }
    const Outcome j = run({"bounds", "--m", "8", "--tc", "1", "--p", "1", "--format", "json"});
    const auto obj = nlohmann::json::parse(j.out);
    CHECK(obj.at("degenerate") == true);
    CHECK(obj.at("lower_second_bits").is_null());
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bounds", "--m", "64", "--tc", "8"}).code == 2);
    CHECK(run({"bounds", "--m", "64", "--tc", "8", "--p", "-1"}).code == 2);
    CHECK(run({"bounds", "--m", "1", "--tc", "8", "--p", "1"}).code == 2);
    CHECK(run({"bounds", "--m", "64", "--tc", "8", "--p", "1", "--format", "xml"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"sweep-alpha", "--alpha", "1", "--p", "1", "--m-list", ""}).code == 2);
    CHECK(run({"sweep-alpha", "--alpha", "1", "--p", "1"}).code == 2);
    CHECK(run({"sweep-alpha", "--alpha", "0", "--p", "1", "--m-list", "1", "--trials", "2000"}).code == 2);
    CHECK(run({"verify-lemmas", "--trials", "100"}).code == 2);
    CHECK(run({"simulate", "--m", "4", "--tc", "1", "--p", "1"}).code == 2);
    CHECK(run({"simulate", "--m", "4", "--tc", "4", "--p", "1", "--seed", "zz"}).code == 2);
    CHECK(run({"bounds", "--help"}).code == 0);
}

TEST_CASE("reruns are byte-identical and --out writes the same bytes") {
    const std::vector<std::string> args{"sweep-alpha", "--alpha", "0.5", "--p", "10", "--m-list", "4,9,16",
                                        "--trials", "1500", "--seed", "0x1234"};
    const Outcome a = run(args);
    const Outcome b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    const auto path = std::filesystem::temp_directory_path() / "miso_lab_cli_test.csv";
    auto with_out = args;
    with_out.push_back("--out");
    with_out.push_back(path.string());
    const Outcome c = run(with_out);
    CHECK(c.code == 0);
    CHECK(c.out.empty());
    CHECK(slurp(path) == a.out);
    std::filesystem::remove(path);
}

TEST_CASE("simulate json rows") {
    const Outcome j = run({"simulate", "--m", "8", "--tc", "4", "--p", "2", "--trials", "1000", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto obj = nlohmann::json::parse(j.out);
    REQUIRE(obj.at("rows").size() == 2);
    CHECK(obj["rows"][0]["constraint"] == "second");
    CHECK(obj["rows"][1]["constraint"] == "fourth");
    CHECK(obj["rows"][0]["seed"] == 0xC0FFEE);
    CHECK(obj["rows"][0]["trials"] == 1000);
}

TEST_CASE("verify-lemmas: default run passes and every line carries provenance") {
    const Outcome v = run({"verify-lemmas"});
    CHECK(v.code == 0);
    CHECK(v.err.empty());
    std::istringstream in(v.out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        const auto obj = nlohmann::json::parse(line);
        CHECK(obj.contains("trials"));
        CHECK(obj.at("seed") == 0xC0FFEE);
        CHECK(obj.at("pass") == true);
        CHECK(obj.contains("observed"));
        CHECK(obj.contains("bound"));
        CHECK(obj.contains("slack_sigmas"));
        ++lines;
    }
    CHECK(lines > 100);
}
