// protocols.hpp
// Classical wrappers that turn walk measurements into found vertices.
//
// Protocols see the search problem only through an oracle: `query(x)` tests
// one label (a verify query) and `perturb(state)` applies the marked coin to a
// walk state (a walk query). Each protocol also has an exact counterpart that
// computes its success probability from the final distribution with the
// marked set known; those are analysis tools, never used by the protocols.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qwsearch/bits.hpp"
#include "qwsearch/hypercube_walk.hpp"
#include "qwsearch/optimal_search.hpp"
#include "qwsearch/parity.hpp"
#include "qwsearch/state.hpp"

namespace qwsearch {

template <class O>
concept search_oracle = requires(O& o, const O& co, vertex_t x, walk_state& s, unsigned bits) {
    { co.dimension() } -> std::convertible_to<unsigned>;
    { o.query(x) } -> std::same_as<bool>;
    o.perturb(s);
    o.perturb(s, bits);
    { co.ledger() } -> std::convertible_to<const query_ledger&>;
};

/// Oracle over the n-cube with a hidden marked set.
class oracle {
public:
    oracle(unsigned n, std::vector<vertex_t> marked) : n_(n), marked_(std::move(marked)) {
        validate(walk_config{n_, marked_});
    }

    explicit oracle(const walk_config& cfg) : oracle(cfg.n, cfg.marked) {}

    unsigned dimension() const noexcept { return n_; }

    bool query(vertex_t x) {
        ledger_.record_verify();
        return std::find(marked_.begin(), marked_.end(), x) != marked_.end();
    }

    // Marked coin on a walk whose vertex labels carry `ignored_low_bits` extra low bits.
    void perturb(walk_state& s, unsigned ignored_low_bits = 0) {
        if (s.vertex_bits() != n_ + ignored_low_bits) {
            throw std::invalid_argument("oracle::perturb: state does not match the oracle's cube");
        }
        apply_marked_coin(s, marked_, ignored_low_bits);
        ledger_.record_walk();
    }

    const query_ledger& ledger() const noexcept { return ledger_; }

private:
    unsigned n_;
    std::vector<vertex_t> marked_;
    query_ledger ledger_;
};

struct protocol_outcome {
    std::optional<vertex_t> found;  // set only after a positive verify query
    std::uint64_t walk_queries = 0;
    std::uint64_t verify_queries = 0;
    unsigned runs_used = 0;
    bool success = false;

    friend bool operator==(const protocol_outcome&, const protocol_outcome&) = default;
};

namespace detail {

template <search_oracle O>
walk_state oracle_walk(O& o, unsigned steps) {
    const unsigned n = o.dimension();
    walk_state s = uniform_state(n, n);
    for (unsigned i = 0; i < steps; ++i) {
        o.perturb(s);
        apply_shift(s);
    }
    return s;
}

template <search_oracle O>
class outcome_builder {
public:
    explicit outcome_builder(const O& o) : o_(o), start_(o.ledger()) {}

    protocol_outcome finish(std::optional<vertex_t> found, unsigned runs) const {
        protocol_outcome out;
        out.found = found;
        out.walk_queries = o_.ledger().walk_queries - start_.walk_queries;
        out.verify_queries = o_.ledger().verify_queries - start_.verify_queries;
        out.runs_used = runs;
        out.success = found.has_value();
        return out;
    }

private:
    const O& o_;
    query_ledger start_;
};

}  // namespace detail

/// Repeat-until-success: walk `steps` steps, measure the vertex, verify it.
/// Gives up after `max_runs` runs.
template <search_oracle O>
protocol_outcome protocol_skw(O& o, rng& gen, unsigned steps, unsigned max_runs) {
    const detail::outcome_builder<O> builder(o);
    for (unsigned run = 1; run <= max_runs; ++run) {
        const auto m = sample(vertex_distribution(detail::oracle_walk(o, steps)), gen);
        if (o.query(m.vertex)) {
            return builder.finish(m.vertex, run);
        }
    }
    return builder.finish(std::nullopt, max_runs);
}

/// One walk, then the measured vertex and its neighbours x ^ e_d in
/// ascending d until the oracle answers positive.
template <search_oracle O>
protocol_outcome protocol_neighbour(O& o, rng& gen, unsigned steps) {
    const detail::outcome_builder<O> builder(o);
    const auto m = sample(vertex_distribution(detail::oracle_walk(o, steps)), gen);
    if (o.query(m.vertex)) {
        return builder.finish(m.vertex, 1);
    }
    for (unsigned d = 0; d < o.dimension(); ++d) {
        const vertex_t candidate = m.vertex ^ direction_bit(d);
        if (o.query(candidate)) {
            return builder.finish(candidate, 1);
        }
    }
    return builder.finish(std::nullopt, 1);
}

/// One walk with a joint coin and vertex measurement (d_m, x_m); verify x_m,
/// then x_m ^ e_{d_m}. At most two verify queries.
template <search_oracle O>
protocol_outcome protocol_coin_measure(O& o, rng& gen, unsigned steps) {
    const detail::outcome_builder<O> builder(o);
    const auto m = sample(vertex_distribution(detail::oracle_walk(o, steps), true), gen);
    if (o.query(m.vertex)) {
        return builder.finish(m.vertex, 1);
    }
    const vertex_t candidate = m.vertex ^ direction_bit(*m.coin);
    if (o.query(candidate)) {
        return builder.finish(candidate, 1);
    }
    return builder.finish(std::nullopt, 1);
}

enum class optimal_variant { self_loop, extended };

namespace detail {

template <search_oracle O>
walk_state optimal_walk(O& o, unsigned rounds, optimal_variant variant) {
    const unsigned n = o.dimension();
    if (variant == optimal_variant::self_loop) {
        walk_state s = uniform_state(n + 1, n);
        for (unsigned i = 0; i < rounds; ++i) {
            o.perturb(s);
            apply_shift(s);
            unperturbed_step(s);
        }
        return s;
    }
    walk_state s = uniform_state(n + 1, n + 1);
    for (unsigned i = 0; i < rounds; ++i) {
        o.perturb(s, 1);
        apply_shift(s);
        unperturbed_step(s);
    }
    return s;
}

// Vertex distribution over the original n-cube for either variant.
inline distribution optimal_vertex_distribution(const walk_state& s, optimal_variant variant) {
    auto dist = vertex_distribution(s);
    return variant == optimal_variant::self_loop ? dist : marginal_ignoring_last_bit(dist);
}

}  // namespace detail

/// Single shot: `rounds` alternating (oracle, plain) rounds, one vertex
/// measurement that ignores the coin (and the appended bit for the extended
/// variant), one verify query.
template <search_oracle O>
protocol_outcome protocol_optimal(O& o, rng& gen, unsigned rounds,
                                  optimal_variant variant = optimal_variant::self_loop) {
    const detail::outcome_builder<O> builder(o);
    const auto dist = detail::optimal_vertex_distribution(detail::optimal_walk(o, rounds, variant), variant);
    const auto m = sample(dist, gen);
    return builder.finish(o.query(m.vertex) ? std::optional<vertex_t>(m.vertex) : std::nullopt, 1);
}

// protocol_optimal with an oracle marking several vertices; success means any was found.
template <search_oracle O>
protocol_outcome protocol_multi(O& o, rng& gen, unsigned rounds,
                                optimal_variant variant = optimal_variant::self_loop) {
    return protocol_optimal(o, gen, rounds, variant);
}

/// Two walks on the original cube, one from each parity half of psi_0
/// (absolute parity, since the target's parity is unknown), each measured
/// and verified. Two runs, two verify queries at most.
template <search_oracle O>
protocol_outcome protocol_two_parity_runs(O& o, rng& gen, unsigned steps) {
    const detail::outcome_builder<O> builder(o);
    const unsigned n = o.dimension();
    unsigned runs = 0;
    for (parity_class start : {parity_class::even, parity_class::odd}) {
        ++runs;
        walk_state s = std::sqrt(2.0) * project(uniform_state(n, n), {start, 0});
        for (unsigned i = 0; i < steps; ++i) {
            o.perturb(s);
            apply_shift(s);
        }
        const auto m = sample(vertex_distribution(s), gen);
        if (o.query(m.vertex)) {
            return builder.finish(m.vertex, runs);
        }
    }
    return builder.finish(std::nullopt, runs);
}

/// Exact single-run statistics of a protocol, computed from the final state
/// with the marked set known.
struct exact_outcome {
    double success = 0.0;                  // per run
    std::uint64_t walk_queries = 0;        // per run
    double expected_verify_queries = 0.0;  // per run
};

namespace detail {

inline bool is_marked(const std::vector<vertex_t>& marked, vertex_t x) {
    return std::find(marked.begin(), marked.end(), x) != marked.end();
}

}  // namespace detail

inline exact_outcome exact_skw(const walk_config& cfg, unsigned steps) {
    const auto dist = vertex_distribution(run(cfg, steps));
    exact_outcome out{0.0, steps, 1.0};
    for (vertex_t m : cfg.marked) {
        out.success += dist.per_vertex[m];
    }
    return out;
}

// Expected runs of protocol_skw with at most max_runs attempts: (1 - (1-p)^M) / p.
inline double expected_skw_runs(double p, unsigned max_runs) {
    if (p <= 0.0) {
        return max_runs;
    }
    return (1.0 - std::pow(1.0 - p, static_cast<double>(max_runs))) / p;
}

inline exact_outcome exact_neighbour(const walk_config& cfg, unsigned steps) {
    const auto dist = vertex_distribution(run(cfg, steps));
    exact_outcome out{0.0, steps, 0.0};
    for (vertex_t x = 0; x < dist.per_vertex.size(); ++x) {
        const double p = dist.per_vertex[x];
        if (detail::is_marked(cfg.marked, x)) {
            out.success += p;
            out.expected_verify_queries += p;
            continue;
        }
        unsigned queries = 1 + cfg.n;
        for (unsigned d = 0; d < cfg.n; ++d) {
            if (detail::is_marked(cfg.marked, x ^ direction_bit(d))) {
                queries = 2 + d;
                out.success += p;
                break;
            }
        }
        out.expected_verify_queries += p * queries;
    }
    return out;
}

/// Neighbour queries made after the first verify query misses, averaged
/// three ways: over measurements adjacent to a target, over all misses, and
/// over all measurements (0 when the first query hits).
struct neighbour_query_stats {
    double adjacent_probability = 0.0;
    double mean_given_adjacent = 0.0;
    double mean_given_miss = 0.0;
    double mean_overall = 0.0;
};

inline neighbour_query_stats exact_neighbour_queries(const walk_config& cfg, unsigned steps) {
    const auto dist = vertex_distribution(run(cfg, steps));
    neighbour_query_stats out;
    double miss = 0.0;
    double adjacent_total = 0.0;
    for (vertex_t x = 0; x < dist.per_vertex.size(); ++x) {
        const double p = dist.per_vertex[x];
        if (detail::is_marked(cfg.marked, x)) {
            continue;
        }
        miss += p;
        unsigned extra = cfg.n;
        for (unsigned d = 0; d < cfg.n; ++d) {
            if (detail::is_marked(cfg.marked, x ^ direction_bit(d))) {
                extra = d + 1;
                out.adjacent_probability += p;
                adjacent_total += p * extra;
                break;
            }
        }
        out.mean_overall += p * extra;
    }
    out.mean_given_adjacent = out.adjacent_probability > 0.0 ? adjacent_total / out.adjacent_probability : 0.0;
    out.mean_given_miss = miss > 0.0 ? out.mean_overall / miss : 0.0;
    return out;
}

inline exact_outcome exact_coin_measure(const walk_config& cfg, unsigned steps) {
    const auto dist = vertex_distribution(run(cfg, steps), true);
    const std::size_t vertices = dist.per_vertex.size();
    exact_outcome out{0.0, steps, 0.0};
    for (unsigned d = 0; d < cfg.n; ++d) {
        for (vertex_t x = 0; x < vertices; ++x) {
            const double p = dist.per_coin_vertex[d * vertices + x];
            if (detail::is_marked(cfg.marked, x)) {
                out.success += p;
                out.expected_verify_queries += p;
            } else {
                out.expected_verify_queries += 2.0 * p;
                if (detail::is_marked(cfg.marked, x ^ direction_bit(d))) {
                    out.success += p;
                }
            }
        }
    }
    return out;
}

inline distribution optimal_distribution(const walk_config& cfg, unsigned rounds,
                                         optimal_variant variant = optimal_variant::self_loop) {
    query_ledger scratch;
    if (variant == optimal_variant::self_loop) {
        return vertex_distribution(selfloop_run(make_self_loop_config(cfg.n, cfg.marked), rounds, scratch));
    }
    const auto ext = make_extended_config(cfg.n, cfg.marked);
    return marginal_ignoring_last_bit(
        vertex_distribution(alternating_run(ext, rounds, start_state::uniform, scratch)));
}

inline exact_outcome exact_optimal(const walk_config& cfg, unsigned rounds,
                                   optimal_variant variant = optimal_variant::self_loop) {
    const auto dist = optimal_distribution(cfg, rounds, variant);
    exact_outcome out{0.0, rounds, 1.0};
    for (vertex_t m : cfg.marked) {
        out.success += dist.per_vertex[m];
    }
    return out;
}

inline exact_outcome exact_two_parity_runs(const walk_config& cfg, unsigned steps) {
    query_ledger scratch;
    double miss = 1.0;
    double expected_verify = 0.0;
    for (parity_class start : {parity_class::even, parity_class::odd}) {
        walk_state s = std::sqrt(2.0) * project(initial_state(cfg), {start, 0});
        const auto dist = vertex_distribution(run_from(std::move(s), cfg, steps, scratch));
        double hit = 0.0;
        for (vertex_t m : cfg.marked) {
            hit += dist.per_vertex[m];
        }
        expected_verify += miss;
        miss *= 1.0 - hit;
    }
    return {1.0 - miss, 2ull * steps, expected_verify};
}

/// Runs `count` independent trials; trial i gets rng(derive_seed(seed, i)).
/// Results are in trial order.
template <class Trial>
auto run_trials(std::uint64_t count, std::uint64_t seed, Trial&& trial) {
    using result_t = decltype(trial(std::declval<rng&>()));
    std::vector<result_t> results;
    results.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        rng gen(derive_seed(seed, i));
        results.push_back(trial(gen));
    }
    return results;
}

}  // namespace qwsearch
