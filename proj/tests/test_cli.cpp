#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"

using namespace qwsearch;

namespace {

struct cli_result {
    int code;
    std::string out;
    std::string err;
};

cli_result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qwsearch_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') {
                quoted = !quoted;
            } else if (c == ',' && !quoted) {
                fields.push_back(field);
                field.clear();
            } else {
                field += c;
            }
        }
        fields.push_back(field);
        rows.push_back(fields);
    }
    return rows;
}

}  // namespace

TEST_CASE("distribution command", "[cli]") {
    SECTION("n = 5 skw auto: 32 rows, argmax at the target") {
        const auto r = invoke({"distribution", "--algorithm", "skw", "--n", "5", "--targets", "0"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 33);
        CHECK(r.out.rfind("vertex,hamming_weight,probability\n", 0) == 0);
        std::size_t best = 1;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (std::stod(rows[i][2]) > std::stod(rows[best][2])) {
                best = i;
            }
        }
        CHECK(rows[best][0] == "0");
        CHECK(rows[4][1] == "2");
    }
    SECTION("t = 0 is uniform") {
        const auto rows = parse_csv(invoke({"distribution", "--n", "5", "--steps", "0"}).out);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i][2] == "0.03125");
        }
    }
    SECTION("shell totals match the collapsed walk") {
        const auto rows = parse_csv(invoke({"distribution", "--n", "7", "--steps", "11"}).out);
        std::vector<double> by_weight(8, 0.0);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            by_weight[std::stoul(rows[i][1])] += std::stod(rows[i][2]);
        }
        const auto P = shells(collapsed_run(7, 11)).P;
        for (unsigned x = 0; x <= 7; ++x) {
            CHECK(std::abs(by_weight[x] - P[x]) <= 1e-10);
        }
    }
    SECTION("optimal and optimal-reduced measure the same distribution") {
        const auto a = invoke({"distribution", "--algorithm", "optimal", "--n", "6", "--targets", "13"});
        const auto b = invoke({"distribution", "--algorithm", "optimal-reduced", "--n", "6", "--targets", "13"});
        CHECK(a.out == b.out);
    }
    SECTION("json format") {
        const auto r = invoke({"distribution", "--n", "3", "--format", "json"});
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["vertices"].size() == 8);
        CHECK(j["steps"] == optimal_steps(3));
    }
}

TEST_CASE("protocol command", "[cli]") {
    SECTION("optimal, n = 9, exact") {
        const auto r = invoke({"protocol", "--algorithm", "optimal", "--n", "9", "--mode", "exact"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["walk_queries"] == 18);
        CHECK(j["success"].get<double>() >= frozen::optimal_success_threshold);
        CHECK(j["expected_verify_queries"] == 1.0);
    }
    SECTION("sampled skw rate is inside the interval around the exact value") {
        const auto r = invoke({"protocol", "--algorithm", "skw", "--n", "6", "--mode", "sample", "--trials", "2000",
                               "--seed", "4"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        const double exact = j["exact_success"];
        const double rate = j["success_rate"];
        CHECK(std::abs(rate - exact) <= 4 * std::sqrt(exact * (1 - exact) / 2000));
        CHECK(j["ci95_low"].get<double>() <= rate);
        CHECK(j["ci95_high"].get<double>() >= rate);
        CHECK(j["mean_walk_queries"] == static_cast<double>(optimal_steps(6)));
    }
    SECTION("identical seeds give identical bytes") {
        const std::vector<std::string> args{"protocol", "--algorithm", "neighbour", "--n",    "5",
                                            "--mode",   "sample",     "--trials",  "300", "--seed", "77"};
        CHECK(invoke(args).out == invoke(args).out);
    }
    SECTION("neighbour reports the extra-query averages") {
        const auto j = nlohmann::json::parse(invoke({"protocol", "--algorithm", "neighbour", "--n", "8"}).out);
        CHECK(j["extra_queries_given_adjacent"].get<double>() == Catch::Approx(4.5).margin(1e-9));
        CHECK(j.contains("extra_queries_overall"));
    }
    SECTION("skw with repeats") {
        const auto j =
            nlohmann::json::parse(invoke({"protocol", "--algorithm", "skw", "--n", "7", "--max-runs", "3"}).out);
        const double p = j["per_run_success"];
        CHECK(j["success"].get<double>() == Catch::Approx(1 - std::pow(1 - p, 3)));
    }
    SECTION("csv format has one header and one row") {
        const auto rows = parse_csv(invoke({"protocol", "--algorithm", "coin-measure", "--n", "6", "--format", "csv"}).out);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0][0] == "algorithm");
        CHECK(rows[1][0] == "coin-measure");
    }
    SECTION("multi with random targets") {
        const auto r = invoke({"protocol", "--algorithm", "multi", "--n", "7", "--targets", "random:3", "--seed", "5"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        const auto targets = j["targets"].get<std::string>();
        CHECK(std::count(targets.begin(), targets.end(), ';') == 2);
    }
}

TEST_CASE("sweep command", "[cli]") {
    SECTION("n = 5..12 skw: p_c clears the frozen bound") {
        const auto r = invoke({"sweep", "--algorithm", "skw", "--n", "5..12"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 9);
        CHECK(rows[0] == std::vector<std::string>(cli::sweep_columns.begin(), cli::sweep_columns.end()));
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(std::stod(rows[i][4]) >= std::stod(rows[i][5]));
        }
    }
    SECTION("optimal ratio approaches 1/sqrt(2) by n = 12") {
        const auto rows = parse_csv(invoke({"sweep", "--algorithm", "optimal-reduced", "--n", "12"}).out);
        REQUIRE(rows.size() == 2);
        CHECK(std::abs(std::stod(rows[1][9]) - 1 / std::sqrt(2.0)) <= 0.1);
        CHECK(std::stod(rows[1][6]) == Catch::Approx(frozen::at(12).optimal_success).margin(1e-11));
    }
    SECTION("empty range is header only") {
        const auto r = invoke({"sweep", "--n", "9..8"});
        CHECK(r.code == 0);
        CHECK(parse_csv(r.out).size() == 1);
    }
    SECTION("collapsed shortcut agrees with the full walk") {
        const auto collapsed = parse_csv(invoke({"sweep", "--algorithm", "coin-measure", "--n", "7"}).out);
        const auto full = exact_coin_measure(make_config(7, {0}), odd_optimal_steps(7)).success;
        CHECK(std::stod(collapsed[1][6]) == Catch::Approx(full).margin(1e-11));
    }
}

TEST_CASE("verify command", "[cli]") {
    CHECK(invoke({"verify", "appendix-a"}).code == 0);
    CHECK(invoke({"verify", "appendix-b"}).code == 0);
    CHECK(invoke({"verify", "--suite", "parity", "--n", "3..4"}).code == 0);
    const auto bad = invoke({"verify", "nonsense"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
    const auto json = invoke({"verify", "appendix-b", "--n", "3", "--format", "json"});
    const auto j = nlohmann::json::parse(json.out);
    CHECK(j.size() == 4);
    CHECK(j[0]["report"]["passed"] == true);
}

TEST_CASE("usage errors exit with 2", "[cli][errors]") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"distribution", "--n", "abc"}).code == 2);
    CHECK(invoke({"distribution", "--n", "1"}).code == 2);
    CHECK(invoke({"distribution", "--n", "5..6"}).code == 2);
    CHECK(invoke({"distribution", "--n", "5", "--targets", "32"}).code == 2);
    CHECK(invoke({"distribution", "--n", "5", "--targets", "3,3"}).code == 2);
    CHECK(invoke({"distribution", "--algorithm", "bogus"}).code == 2);
    CHECK(invoke({"protocol", "--mode", "sometimes"}).code == 2);
    CHECK(invoke({"protocol", "--mode", "sample", "--trials", "0"}).code == 2);
    CHECK(invoke({"sweep", "--format", "xml"}).code == 2);
    CHECK(invoke({"distribution", "--output", "/nonexistent/dir/out.csv"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("--output writes to a file", "[cli]") {
    const auto path = std::filesystem::temp_directory_path() / "qwsearch_cli_output_test.csv";
    const auto r = invoke({"distribution", "--n", "4", "--output", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == invoke({"distribution", "--n", "4"}).out);
    std::filesystem::remove(path);
}
