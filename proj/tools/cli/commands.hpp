// commands.hpp
// Subcommands of qwsearch_cli. Every command writes to a caller-supplied
// stream so the whole frontend can be driven from tests.
//
// Exit codes: 0 ok, 1 a verification check failed, 2 usage error.

#pragma once

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qwsearch/json.hpp"
#include "qwsearch/qwsearch.hpp"

namespace qwsearch::cli {

enum exit_code : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2 };

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string> algorithms{"skw",     "neighbour",       "coin-measure",
                                                 "optimal", "optimal-reduced", "multi"};
inline const std::vector<std::string> suites{"appendix-a", "appendix-b", "parity", "all"};

struct experiment_spec {
    std::string algorithm = "skw";
    std::string n = "5";
    std::string targets = "0";
    std::string steps = "auto";
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::string mode = "exact";
    std::string format;  // empty: the command's default
    unsigned max_runs = 1;
    std::string suite;
    bool n_given = true;
};

struct n_range {
    unsigned first = 0;
    unsigned last = 0;
};

inline std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw usage_error(what + ": expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

inline unsigned parse_unsigned(const std::string& text, const std::string& what) {
    const std::uint64_t value = parse_u64(text, what);
    if (value > 1'000'000'000) {
        throw usage_error(what + ": value too large: " + text);
    }
    return static_cast<unsigned>(value);
}

// "9" or "5..12"; a range with first > last is empty.
inline n_range parse_n_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const unsigned n = parse_unsigned(text, "--n");
        return {n, n};
    }
    return {parse_unsigned(text.substr(0, dots), "--n"), parse_unsigned(text.substr(dots + 2), "--n")};
}

inline unsigned parse_n(const std::string& text) {
    const n_range r = parse_n_range(text);
    if (r.first != r.last) {
        throw usage_error("--n: this command takes a single dimension, got '" + text + "'");
    }
    return r.first;
}

inline void require_dimension(unsigned n, unsigned extra_bits = 0) {
    if (n < 2 || n + extra_bits > max_walk_dimension) {
        throw usage_error("--n: dimension must be in [2, " + std::to_string(max_walk_dimension - extra_bits) +
                          "], got " + std::to_string(n));
    }
}

/// "3,17,40" or "random:m". Random targets are m distinct labels drawn from rng(seed).
inline std::vector<vertex_t> resolve_targets(const std::string& text, unsigned n, std::uint64_t seed) {
    const vertex_t count = vertex_t{1} << n;
    std::vector<vertex_t> out;
    if (text.rfind("random:", 0) == 0) {
        const std::uint64_t m = parse_u64(text.substr(7), "--targets");
        if (m == 0 || m >= count) {
            throw usage_error("--targets: random:m needs 1 <= m < 2^n");
        }
        rng gen(seed);
        while (out.size() < m) {
            const vertex_t x = gen.next() % count;
            if (std::find(out.begin(), out.end(), x) == out.end()) {
                out.push_back(x);
            }
        }
        return out;
    }
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const vertex_t x = parse_u64(item, "--targets");
        if (x >= count) {
            throw usage_error("--targets: label " + item + " is outside the " + std::to_string(n) + "-cube");
        }
        if (std::find(out.begin(), out.end(), x) != out.end()) {
            throw usage_error("--targets: duplicate label " + item);
        }
        out.push_back(x);
    }
    if (out.empty()) {
        throw usage_error("--targets: no labels given");
    }
    return out;
}

inline bool uses_extended_cube(const std::string& algorithm) {
    return algorithm == "optimal" || algorithm == "optimal-reduced" || algorithm == "multi";
}

// auto: t_f for skw and neighbour, t_f,o for coin-measure, floor(t_f(n+1)/2) rounds otherwise.
inline unsigned resolve_steps(const experiment_spec& spec, unsigned n) {
    if (spec.steps != "auto") {
        return parse_unsigned(spec.steps, "--steps");
    }
    if (spec.algorithm == "coin-measure") {
        return odd_optimal_steps(n);
    }
    if (uses_extended_cube(spec.algorithm)) {
        return optimal_query_count(n);
    }
    return optimal_steps(n);
}

inline optimal_variant variant_of(const std::string& algorithm) {
    return algorithm == "optimal" ? optimal_variant::extended : optimal_variant::self_loop;
}

// Vertex distribution measured by the protocol behind `algorithm`.
inline distribution final_distribution(const std::string& algorithm, const walk_config& cfg, unsigned steps) {
    if (uses_extended_cube(algorithm)) {
        return optimal_distribution(cfg, steps, variant_of(algorithm));
    }
    return vertex_distribution(run(cfg, steps));
}

inline std::string format_number(double value) {
    std::ostringstream os;
    os << std::setprecision(12) << value;
    return os.str();
}

inline std::string join_targets(const std::vector<vertex_t>& targets) {
    std::string out;
    for (vertex_t x : targets) {
        out += (out.empty() ? "" : ";") + std::to_string(x);
    }
    return out;
}

// Quotes fields containing a comma or quote, doubling embedded quotes.
inline std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

inline std::string csv_field(const nlohmann::ordered_json& v) {
    if (v.is_number_float()) {
        return format_number(v.get<double>());
    }
    if (v.is_string()) {
        return csv_escape(v.get<std::string>());
    }
    if (v.is_null()) {
        return "";
    }
    return v.dump();
}

// Header line, then one line per record with fields in header order.
inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<nlohmann::ordered_json>& records) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const auto& r : records) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            out << (i ? "," : "") << csv_field(r.at(header[i]));
        }
        out << '\n';
    }
}

inline std::vector<std::string> keys_of(const nlohmann::ordered_json& record) {
    std::vector<std::string> keys;
    for (const auto& item : record.items()) {
        keys.push_back(item.key());
    }
    return keys;
}

inline void require_format(const std::string& format) {
    if (!format.empty() && format != "csv" && format != "json") {
        throw usage_error("--format: expected csv or json, got '" + format + "'");
    }
}

// distribution: vertex,hamming_weight,probability for the final state.
inline int cmd_distribution(const experiment_spec& spec, std::ostream& out) {
    require_format(spec.format);
    const unsigned n = parse_n(spec.n);
    require_dimension(n, uses_extended_cube(spec.algorithm) ? 1 : 0);
    const auto targets = resolve_targets(spec.targets, n, spec.seed);
    const unsigned steps = resolve_steps(spec, n);
    const auto dist = final_distribution(spec.algorithm, make_config(n, targets), steps);

    std::vector<nlohmann::ordered_json> rows;
    rows.reserve(dist.per_vertex.size());
    for (vertex_t x = 0; x < dist.per_vertex.size(); ++x) {
        rows.push_back({{"vertex", x}, {"hamming_weight", hamming_weight(x)}, {"probability", dist.per_vertex[x]}});
    }
    if (spec.format == "json") {
        nlohmann::ordered_json j{{"algorithm", spec.algorithm}, {"n", n}, {"targets", targets},
                                 {"steps", steps},          {"vertices", rows}};
        out << j.dump(2) << '\n';
    } else {
        write_csv(out, {"vertex", "hamming_weight", "probability"}, rows);
    }
    return exit_ok;
}

inline nlohmann::ordered_json protocol_header(const experiment_spec& spec, unsigned n,
                                              const std::vector<vertex_t>& targets, unsigned steps) {
    return {{"algorithm", spec.algorithm}, {"n", n},         {"targets", join_targets(targets)},
            {"steps", steps},              {"mode", spec.mode}};
}

inline nlohmann::ordered_json exact_protocol(const experiment_spec& spec, const walk_config& cfg, unsigned steps) {
    auto j = protocol_header(spec, cfg.n, cfg.marked, steps);
    exact_outcome single;
    if (spec.algorithm == "skw") {
        single = exact_skw(cfg, steps);
    } else if (spec.algorithm == "neighbour") {
        single = exact_neighbour(cfg, steps);
    } else if (spec.algorithm == "coin-measure") {
        single = exact_coin_measure(cfg, steps);
    } else {
        single = exact_optimal(cfg, steps, variant_of(spec.algorithm));
    }
    const unsigned runs_allowed = spec.algorithm == "skw" ? spec.max_runs : 1;
    const double p = single.success;
    const double runs = expected_skw_runs(p, runs_allowed);
    j["success"] = 1.0 - std::pow(1.0 - p, static_cast<double>(runs_allowed));
    j["per_run_success"] = p;
    j["walk_queries"] = single.walk_queries;
    j["expected_runs"] = runs;
    j["expected_walk_queries"] = runs * static_cast<double>(single.walk_queries);
    j["expected_verify_queries"] = runs * single.expected_verify_queries;
    if (spec.algorithm == "neighbour") {
        const auto stats = exact_neighbour_queries(cfg, steps);
        j["extra_queries_given_adjacent"] = stats.mean_given_adjacent;
        j["extra_queries_given_miss"] = stats.mean_given_miss;
        j["extra_queries_overall"] = stats.mean_overall;
    }
    return j;
}

inline protocol_outcome run_protocol(const experiment_spec& spec, const walk_config& cfg, unsigned steps,
                                     rng& gen) {
    oracle o(cfg);
    if (spec.algorithm == "skw") {
        return protocol_skw(o, gen, steps, spec.max_runs);
    }
    if (spec.algorithm == "neighbour") {
        return protocol_neighbour(o, gen, steps);
    }
    if (spec.algorithm == "coin-measure") {
        return protocol_coin_measure(o, gen, steps);
    }
    if (spec.algorithm == "multi") {
        return protocol_multi(o, gen, steps, variant_of(spec.algorithm));
    }
    return protocol_optimal(o, gen, steps, variant_of(spec.algorithm));
}

// Wilson score interval at 95%.
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double p = successes / nt;
    const double denom = 1.0 + z * z / nt;
    const double centre = (p + z * z / (2 * nt)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nt + z * z / (4 * nt * nt)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline nlohmann::ordered_json sampled_protocol(const experiment_spec& spec, const walk_config& cfg, unsigned steps) {
    if (spec.trials == 0) {
        throw usage_error("--trials must be positive in sample mode");
    }
    const auto outcomes =
        run_trials(spec.trials, spec.seed, [&](rng& gen) { return run_protocol(spec, cfg, steps, gen); });
    std::uint64_t successes = 0;
    double walk = 0.0;
    double verify = 0.0;
    double runs = 0.0;
    double adjacent_extra = 0.0;
    std::uint64_t adjacent = 0;
    for (const auto& o : outcomes) {
        successes += o.success ? 1 : 0;
        walk += static_cast<double>(o.walk_queries);
        verify += static_cast<double>(o.verify_queries);
        runs += o.runs_used;
        if (o.success && o.verify_queries > 1) {
            adjacent_extra += static_cast<double>(o.verify_queries - 1);
            ++adjacent;
        }
    }
    const double trials = static_cast<double>(spec.trials);
    const auto [low, high] = wilson_interval(successes, spec.trials);
    auto j = protocol_header(spec, cfg.n, cfg.marked, steps);
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["successes"] = successes;
    j["success_rate"] = successes / trials;
    j["ci95_low"] = low;
    j["ci95_high"] = high;
    j["exact_success"] = exact_protocol(spec, cfg, steps)["success"];
    j["mean_walk_queries"] = walk / trials;
    j["mean_verify_queries"] = verify / trials;
    j["mean_runs"] = runs / trials;
    if (spec.algorithm == "neighbour") {
        j["extra_queries_given_adjacent"] = adjacent ? adjacent_extra / static_cast<double>(adjacent) : 0.0;
    }
    return j;
}

// protocol: exact probabilities, or aggregated sampled trials.
inline int cmd_protocol(const experiment_spec& spec, std::ostream& out) {
    require_format(spec.format);
    if (spec.mode != "exact" && spec.mode != "sample") {
        throw usage_error("--mode: expected exact or sample, got '" + spec.mode + "'");
    }
    if (spec.max_runs == 0) {
        throw usage_error("--max-runs must be positive");
    }
    const unsigned n = parse_n(spec.n);
    require_dimension(n, uses_extended_cube(spec.algorithm) ? 1 : 0);
    const auto cfg = make_config(n, resolve_targets(spec.targets, n, spec.seed));
    const unsigned steps = resolve_steps(spec, n);
    const auto record = spec.mode == "exact" ? exact_protocol(spec, cfg, steps) : sampled_protocol(spec, cfg, steps);
    if (spec.format == "csv") {
        write_csv(out, keys_of(record), {record});
    } else {
        out << record.dump(2) << '\n';
    }
    return exit_ok;
}

// Exact success of `algorithm` after `steps`, single target at 0 via the collapsed walk.
inline double collapsed_success(const std::string& algorithm, unsigned n, unsigned steps) {
    const auto s = collapsed_run(n, steps);
    const auto P = shells(s).P;
    if (algorithm == "neighbour") {
        return P[0] + P[1];
    }
    if (algorithm == "coin-measure") {
        return P[0] + std::norm(s.left(1));
    }
    return P[0];
}

inline const std::vector<std::string> sweep_columns{"n",           "steps",   "p0",        "p1",
                                                    "p_c",         "p_c_bound", "success", "walk_queries",
                                                    "skw_steps",   "ratio"};

// sweep: one row per n. p0, p1, p_c are the SKW values at t_f; success is
// the selected algorithm's exact success at its step count.
inline int cmd_sweep(const experiment_spec& spec, std::ostream& out) {
    require_format(spec.format);
    const n_range range = parse_n_range(spec.n);
    std::vector<nlohmann::ordered_json> rows;
    for (unsigned n = range.first; n <= range.last && range.first <= range.last; ++n) {
        const bool extended = uses_extended_cube(spec.algorithm);
        require_dimension(n, extended ? 1 : 0);
        const auto targets = resolve_targets(spec.targets, n, spec.seed);
        const unsigned steps = resolve_steps(spec, n);
        const unsigned t_f = optimal_steps(n);
        const auto P = shells(collapsed_run(n, t_f)).P;
        double success = 0.0;
        const bool single_origin = targets.size() == 1;
        if (!extended && single_origin) {
            success = collapsed_success(spec.algorithm, n, steps);
        } else {
            experiment_spec exact = spec;
            exact.max_runs = 1;
            success = exact_protocol(exact, make_config(n, targets), steps)["success"].get<double>();
        }
        rows.push_back({{"n", n},
                        {"steps", steps},
                        {"p0", P[0]},
                        {"p1", P[1]},
                        {"p_c", P[0] + P[1]},
                        {"p_c_bound", 1.0 - frozen::pc_constant / n},
                        {"success", success},
                        {"walk_queries", steps},
                        {"skw_steps", t_f},
                        {"ratio", static_cast<double>(steps) / t_f}});
    }
    if (spec.format == "json") {
        out << nlohmann::ordered_json(rows).dump(2) << '\n';
    } else {
        write_csv(out, sweep_columns, rows);
    }
    return exit_ok;
}

inline std::vector<check_report> suite_reports(const std::string& suite, const n_range& range, std::uint64_t seed) {
    std::vector<check_report> reports;
    rng gen(seed);
    for (unsigned n = range.first; n <= range.last && range.first <= range.last; ++n) {
        const vertex_t far = (vertex_t{1} << n) - 1;
        if (suite == "appendix-a") {
            reports.push_back(shell_inequalities(n, 2 * optimal_steps(n)).checks);
        } else if (suite == "parity") {
            for (vertex_t target : {vertex_t{0}, far}) {
                const auto cfg = make_config(n, {target});
                reports.push_back(check_subspace_swap(cfg, 20, gen));
                reports.push_back(check_subspace_swap(cfg, 20, gen, false));
                reports.push_back(check_projector_algebra(cfg, 10, gen));
                reports.push_back(check_odd_start_step(cfg));
            }
            reports.push_back(factor_two_even_start(n).checks);
        } else if (suite == "appendix-b") {
            const auto cfg = make_extended_config(n, {far});
            reports.push_back(check_x_symmetry(cfg, 10, gen));
            reports.push_back(check_coin_factorization(cfg, 10, gen));
            reports.push_back(check_alternating_equivalence(cfg, 10));
            reports.push_back(check_self_loop_reduction(cfg, 2 * optimal_query_count(n)));
        }
    }
    return reports;
}

inline n_range default_verify_range(const std::string& suite) {
    if (suite == "appendix-a") {
        return {3, 8};
    }
    if (suite == "appendix-b") {
        return {2, 5};
    }
    return {2, 8};
}

// verify: runs the named invariant suite(s); exit 1 if any check fails.
inline int cmd_verify(const experiment_spec& spec, std::ostream& out, std::ostream& err) {
    require_format(spec.format);
    if (std::find(suites.begin(), suites.end(), spec.suite) == suites.end()) {
        throw usage_error("unknown suite '" + spec.suite + "'");
    }
    const std::vector<std::string> selected =
        spec.suite == "all" ? std::vector<std::string>{"appendix-a", "parity", "appendix-b"}
                            : std::vector<std::string>{spec.suite};
    std::vector<nlohmann::ordered_json> rows;
    nlohmann::ordered_json grouped = nlohmann::ordered_json::array();
    bool passed = true;
    for (const auto& suite : selected) {
        const n_range range = spec.n_given ? parse_n_range(spec.n) : default_verify_range(suite);
        for (unsigned n = range.first; n <= range.last && range.first <= range.last; ++n) {
            require_dimension(n, suite == "appendix-b" ? 1 : 0);
        }
        for (const auto& report : suite_reports(suite, range, spec.seed)) {
            grouped.push_back({{"suite", suite}, {"report", report}});
            for (const auto& c : report.checks) {
                nlohmann::ordered_json row{{"suite", suite}, {"group", report.suite}};
                row.update(nlohmann::ordered_json(c));
                rows.push_back(row);
                if (!c.passed()) {
                    passed = false;
                    err << "FAIL " << report.suite << ": " << c.check << " n=" << c.n;
                    if (c.t) {
                        err << " t=" << *c.t;
                    }
                    if (c.x) {
                        err << " x=" << *c.x;
                    }
                    err << " residual=" << format_number(c.value) << " bound=" << format_number(c.bound) << '\n';
                }
            }
        }
    }
    if (spec.format == "json") {
        out << grouped.dump(2) << '\n';
    } else {
        write_csv(out, {"suite", "group", "check", "n", "t", "x", "value", "relation", "bound", "passed"}, rows);
    }
    return passed ? exit_ok : exit_check_failed;
}

inline void add_output_options(CLI::App* sub, std::string& output, experiment_spec& spec) {
    sub->add_option("--output", output, "Output path, or stdout")->default_val("stdout");
    sub->add_option("--format", spec.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

inline void add_walk_options(CLI::App* sub, experiment_spec& spec, bool n_range_allowed) {
    sub->add_option("--algorithm", spec.algorithm, "Search algorithm")
        ->check(CLI::IsMember(algorithms))
        ->default_val("skw");
    sub->add_option("--n", spec.n, n_range_allowed ? "Dimension or range a..b" : "Hypercube dimension")
        ->default_val("5");
    sub->add_option("--targets", spec.targets, "Comma-separated labels or random:m")->default_val("0");
    sub->add_option("--steps", spec.steps, "Step or round count, or auto")->default_val("auto");
    sub->add_option("--seed", spec.seed, "RNG seed")->default_val(1);
}

/// Parses argv and runs one subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact simulator and experiment harness for quantum-walk search on the hypercube", "qwsearch_cli"};
    app.require_subcommand(1);
    experiment_spec spec;
    std::string output = "stdout";

    auto* distribution_cmd = app.add_subcommand("distribution", "Final vertex distribution as CSV");
    add_walk_options(distribution_cmd, spec, false);
    add_output_options(distribution_cmd, output, spec);

    auto* protocol_cmd = app.add_subcommand("protocol", "Run a search protocol, exactly or by sampling");
    add_walk_options(protocol_cmd, spec, false);
    protocol_cmd->add_option("--trials", spec.trials, "Trials in sample mode")->default_val(1000);
    protocol_cmd->add_option("--mode", spec.mode, "exact or sample")
        ->check(CLI::IsMember({"exact", "sample"}))
        ->default_val("exact");
    protocol_cmd->add_option("--max-runs", spec.max_runs, "Repeat limit for skw")->default_val(1);
    add_output_options(protocol_cmd, output, spec);

    auto* sweep_cmd = app.add_subcommand("sweep", "Exact success and query counts over a range of n");
    add_walk_options(sweep_cmd, spec, true);
    add_output_options(sweep_cmd, output, spec);

    auto* verify_cmd = app.add_subcommand("verify", "Run an invariant suite");
    verify_cmd->add_option("suite,--suite", spec.suite, "appendix-a, appendix-b, parity or all")
        ->required()
        ->check(CLI::IsMember(suites));
    auto* verify_n = verify_cmd->add_option("--n", spec.n, "Dimension or range a..b (default per suite)");
    verify_cmd->add_option("--seed", spec.seed, "RNG seed for random test states")->default_val(1);
    add_output_options(verify_cmd, output, spec);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    }
    spec.n_given = verify_n->count() > 0;

    std::ofstream file;
    std::ostream* dest = &out;
    if (output != "stdout" && output != "-") {
        file.open(output);
        if (!file) {
            err << "error: cannot open " << output << " for writing\n";
            return exit_usage;
        }
        dest = &file;
    }
    try {
        if (distribution_cmd->parsed()) {
            return cmd_distribution(spec, *dest);
        }
        if (protocol_cmd->parsed()) {
            return cmd_protocol(spec, *dest);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(spec, *dest);
        }
        return cmd_verify(spec, *dest, err);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
    }
    return exit_usage;
}

}  // namespace qwsearch::cli
