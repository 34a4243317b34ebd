// hypercube_walk.hpp
// Coined quantum walk on the n-dimensional hypercube: XOR shift, Grover and
// -1 coins, the oracle-perturbed coin and step iteration with query counting.
//
// The kernels are written for a general coin dimension k on a 2^b vertex
// space. Directions d < b flip bit d of the vertex label; directions d >= b
// are self loops. The plain search walk has k = b = n, the extended walk of
// the optimal-query search has k = b = n + 1 and the self-loop walk has
// k = n + 1, b = n.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "qwsearch/bits.hpp"
#include "qwsearch/state.hpp"

namespace qwsearch {

enum class coin_kind { grover, neg_identity };

// Largest dimension accepted for full-space walks (n * 2^n amplitudes).
inline constexpr unsigned max_walk_dimension = 26;

struct walk_config {
    unsigned n = 0;
    std::vector<vertex_t> marked;
    coin_kind c0 = coin_kind::grover;
    coin_kind c1 = coin_kind::neg_identity;

    std::size_t vertex_count() const noexcept { return std::size_t{1} << n; }
};

inline void validate(const walk_config& cfg) {
    if (cfg.n < 2) {
        // The 1-dimensional Grover coin is the identity and the walk never mixes.
        throw std::invalid_argument("walk_config: n must be at least 2");
    }
    if (cfg.n > max_walk_dimension) {
        throw capacity_error("walk_config: n = " + std::to_string(cfg.n) + " exceeds " +
                             std::to_string(max_walk_dimension));
    }
    if (cfg.marked.empty()) {
        throw std::invalid_argument("walk_config: marked set is empty");
    }
    std::unordered_set<vertex_t> seen;
    for (vertex_t x : cfg.marked) {
        if (x >= cfg.vertex_count()) {
            throw std::out_of_range("walk_config: marked vertex " + std::to_string(x) +
                                    " outside the hypercube");
        }
        if (!seen.insert(x).second) {
            throw std::invalid_argument("walk_config: duplicate marked vertex " + std::to_string(x));
        }
    }
}

inline walk_config make_config(unsigned n, std::vector<vertex_t> marked) {
    walk_config cfg{n, std::move(marked)};
    validate(cfg);
    return cfg;
}

/// Oracle usage counters. A perturbed coin consults the oracle once in
/// superposition (walk query); testing a single label classically is a
/// verify query.
struct query_ledger {
    std::uint64_t walk_queries = 0;
    std::uint64_t verify_queries = 0;

    std::uint64_t total() const noexcept { return walk_queries + verify_queries; }
    void record_walk() noexcept { ++walk_queries; }
    void record_verify() noexcept { ++verify_queries; }

    friend bool operator==(const query_ledger&, const query_ledger&) = default;
};

// Equal superposition over every |d, x>.
inline walk_state uniform_state(unsigned coin_dim, unsigned vertex_bits) {
    walk_state s(coin_dim, vertex_bits);
    const double a = 1.0 / std::sqrt(static_cast<double>(s.size()));
    std::fill(s.amplitudes().begin(), s.amplitudes().end(), amplitude{a, 0.0});
    return s;
}

inline walk_state initial_state(const walk_config& cfg) {
    validate(cfg);
    return uniform_state(cfg.n, cfg.n);
}

inline void require_shape(const walk_state& s, unsigned coin_dim, unsigned vertex_bits,
                          const char* what) {
    if (s.coin_dim() != coin_dim || s.vertex_bits() != vertex_bits) {
        throw std::invalid_argument(std::string(what) + ": state shape " +
                                    std::to_string(s.coin_dim()) + "x2^" +
                                    std::to_string(s.vertex_bits()) + " does not match " +
                                    std::to_string(coin_dim) + "x2^" + std::to_string(vertex_bits));
    }
}

// |d, x> -> |d, x ^ e_d> for d < vertex_bits; self-loop directions are untouched.
inline void apply_shift(walk_state& s) noexcept {
    const unsigned moving = std::min(s.coin_dim(), s.vertex_bits());
    for (unsigned d = 0; d < moving; ++d) {
        auto block = s.direction(d);
        const vertex_t bit = direction_bit(d);
        for (vertex_t x = 0; x < block.size(); ++x) {
            if ((x & bit) == 0) {
                std::swap(block[x], block[x | bit]);
            }
        }
    }
}

inline void apply_shift(walk_state& s, const walk_config& cfg) {
    require_shape(s, cfg.n, cfg.n, "apply_shift");
    apply_shift(s);
}

namespace detail {

// Grover reflection 2|s_c><s_c| - 1 on every vertex's coin block.
inline void grover_all(walk_state& s, std::vector<amplitude>& sums) {
    const std::size_t vertices = s.vertex_count();
    sums.assign(vertices, amplitude{});
    for (unsigned d = 0; d < s.coin_dim(); ++d) {
        auto block = s.direction(d);
        for (std::size_t x = 0; x < vertices; ++x) {
            sums[x] += block[x];
        }
    }
    const double scale = 2.0 / s.coin_dim();
    for (std::size_t x = 0; x < vertices; ++x) {
        sums[x] *= scale;
    }
    for (unsigned d = 0; d < s.coin_dim(); ++d) {
        auto block = s.direction(d);
        for (std::size_t x = 0; x < vertices; ++x) {
            block[x] = sums[x] - block[x];
        }
    }
}

inline void coin_all(walk_state& s, coin_kind kind, std::vector<amplitude>& scratch) {
    if (kind == coin_kind::grover) {
        grover_all(s, scratch);
    } else {
        for (auto& a : s.amplitudes()) {
            a = -a;
        }
    }
}

inline void coin_one(walk_state& s, vertex_t x, coin_kind kind) {
    if (kind == coin_kind::grover) {
        amplitude sum{};
        for (unsigned d = 0; d < s.coin_dim(); ++d) {
            sum += s(d, x);
        }
        sum *= 2.0 / s.coin_dim();
        for (unsigned d = 0; d < s.coin_dim(); ++d) {
            s(d, x) = sum - s(d, x);
        }
    } else {
        for (unsigned d = 0; d < s.coin_dim(); ++d) {
            s(d, x) = -s(d, x);
        }
    }
}

}  // namespace detail

inline void apply_grover_coin(walk_state& s) {
    std::vector<amplitude> scratch;
    detail::grover_all(s, scratch);
}

/// Coin c0 on every vertex except those whose label, shifted right by
/// `ignored_low_bits`, is in `marked`; those get c1.
///
/// With ignored_low_bits = 1 an oracle on the n-bit space acts on an
/// (n+1)-bit space as oracle (x) identity on the low qubit, marking every
/// label pair {2x, 2x + 1}.
inline void apply_marked_coin(walk_state& s, std::span<const vertex_t> marked,
                              unsigned ignored_low_bits = 0, coin_kind c0 = coin_kind::grover,
                              coin_kind c1 = coin_kind::neg_identity) {
    std::vector<vertex_t> vertices;
    vertices.reserve(marked.size() << ignored_low_bits);
    for (vertex_t m : marked) {
        for (vertex_t low = 0; low < (vertex_t{1} << ignored_low_bits); ++low) {
            const vertex_t y = (m << ignored_low_bits) | low;
            if (y >= s.vertex_count()) {
                throw std::out_of_range("apply_marked_coin: marked vertex outside the state");
            }
            vertices.push_back(y);
        }
    }
    // Saved blocks are restored after c0 so c1 sees the original amplitudes.
    std::vector<amplitude> saved(vertices.size() * s.coin_dim());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (unsigned d = 0; d < s.coin_dim(); ++d) {
            saved[i * s.coin_dim() + d] = s(d, vertices[i]);
        }
    }
    std::vector<amplitude> scratch;
    detail::coin_all(s, c0, scratch);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (unsigned d = 0; d < s.coin_dim(); ++d) {
            s(d, vertices[i]) = saved[i * s.coin_dim() + d];
        }
        detail::coin_one(s, vertices[i], c1);
    }
}

inline void apply_coin(walk_state& s, const walk_config& cfg, bool perturbed, query_ledger& ledger) {
    require_shape(s, cfg.n, cfg.n, "apply_coin");
    if (!perturbed) {
        std::vector<amplitude> scratch;
        detail::coin_all(s, cfg.c0, scratch);
        return;
    }
    apply_marked_coin(s, cfg.marked, 0, cfg.c0, cfg.c1);
    ledger.record_walk();
}

// U' = S C'. One walk query.
inline void step(walk_state& s, const walk_config& cfg, query_ledger& ledger) {
    apply_coin(s, cfg, true, ledger);
    apply_shift(s);
}

// U = S C0, no oracle involved.
inline void unperturbed_step(walk_state& s) {
    apply_grover_coin(s);
    apply_shift(s);
}

// Nearest integer to (pi/2) sqrt(2^(n-1)), halves rounded up.
inline unsigned optimal_steps(unsigned n) {
    if (n < 2) {
        throw std::invalid_argument("optimal_steps: n must be at least 2");
    }
    const double tf = std::numbers::pi / 2.0 * std::sqrt(std::ldexp(1.0, static_cast<int>(n) - 1));
    return static_cast<unsigned>(std::floor(tf + 0.5));
}

// 2 floor(t_f / 2) and 2 floor(t_f / 2) + 1.
inline unsigned even_optimal_steps(unsigned n) { return 2 * (optimal_steps(n) / 2); }
inline unsigned odd_optimal_steps(unsigned n) { return even_optimal_steps(n) + 1; }

inline walk_state run_from(walk_state s, const walk_config& cfg, unsigned t, query_ledger& ledger) {
    require_shape(s, cfg.n, cfg.n, "run_from");
    for (unsigned i = 0; i < t; ++i) {
        step(s, cfg, ledger);
    }
    return s;
}

inline walk_state run(const walk_config& cfg, unsigned t, query_ledger& ledger) {
    return run_from(initial_state(cfg), cfg, t, ledger);
}

inline walk_state run(const walk_config& cfg, unsigned t) {
    query_ledger ledger;
    return run(cfg, t, ledger);
}

}  // namespace qwsearch
