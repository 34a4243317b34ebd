// optimal_search.hpp
// Search with (pi/4) sqrt(N) oracle queries.
//
// Vertices of the n-cube are embedded into the even-parity vertices of an
// (n+1)-cube by x -> 2x + parity(x), so the appended bit is bit 0 of the
// extended label. On the extended cube the walk alternates a coin that marks
// every label pair {2x, 2x+1} with x marked (the original oracle tensored
// with identity on the appended qubit) and the plain Grover coin. Only the
// first of each pair queries the oracle.
//
// Because X (flip of bit 0) commutes with both steps and fixes the uniform
// state, bit 0 can be folded away: the self-loop walk keeps the 2^n vertex
// space and adds coin direction n, which leaves the walker in place.

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwsearch/bits.hpp"
#include "qwsearch/hypercube_walk.hpp"
#include "qwsearch/parity.hpp"
#include "qwsearch/report.hpp"
#include "qwsearch/state.hpp"

namespace qwsearch {

inline vertex_t embed(vertex_t x, unsigned n) {
    if (n >= 63 || x >= (vertex_t{1} << n)) {
        throw std::out_of_range("embed: label " + std::to_string(x) + " outside the " +
                                std::to_string(n) + "-cube");
    }
    return 2 * x + parity(x);
}

// Drops the appended bit of an even-parity label; odd labels have no preimage.
inline std::optional<vertex_t> unembed(vertex_t y, unsigned n) {
    if (n >= 63 || y >= (vertex_t{1} << (n + 1))) {
        throw std::out_of_range("unembed: label " + std::to_string(y) + " outside the " +
                                std::to_string(n + 1) + "-cube");
    }
    if (parity(y) != 0) {
        return std::nullopt;
    }
    return y >> 1;
}

struct extended_config {
    unsigned n = 0;
    std::vector<vertex_t> marked_original;
    std::vector<vertex_t> marked_extended;

    unsigned n_prime() const noexcept { return n + 1; }
};

inline extended_config make_extended_config(unsigned n, std::vector<vertex_t> marked) {
    validate(walk_config{n, marked});
    if (n + 1 > max_walk_dimension) {
        throw capacity_error("extended_config: n + 1 exceeds the supported dimension");
    }
    extended_config cfg{n, std::move(marked), {}};
    for (vertex_t x : cfg.marked_original) {
        cfg.marked_extended.push_back(embed(x, n));
    }
    return cfg;
}

// The (n+1)-cube search walk whose perturbed coin marks only the images.
inline walk_config extended_walk_config(const extended_config& cfg) {
    return walk_config{cfg.n_prime(), cfg.marked_extended};
}

struct self_loop_config {
    unsigned n = 0;
    std::vector<vertex_t> marked_original;

    unsigned coin_dim() const noexcept { return n + 1; }
};

inline self_loop_config make_self_loop_config(unsigned n, std::vector<vertex_t> marked) {
    validate(walk_config{n, marked});
    return self_loop_config{n, std::move(marked)};
}

enum class start_state { uniform, even_projected };

inline walk_state extended_start(const extended_config& cfg, start_state start) {
    walk_state s = uniform_state(cfg.n_prime(), cfg.n_prime());
    if (start == start_state::even_projected) {
        // Every image has even parity, so "relative to the target" is absolute parity.
        s = std::sqrt(2.0) * project(std::move(s), {parity_class::even, 0});
    }
    return s;
}

// Coin marking both the image and the anti-image of every target. One walk query.
inline void apply_pair_marked_coin(walk_state& s, const extended_config& cfg, query_ledger& ledger) {
    require_shape(s, cfg.n_prime(), cfg.n_prime(), "apply_pair_marked_coin");
    apply_marked_coin(s, cfg.marked_original, 1);
    ledger.record_walk();
}

// (U U'')^r: each round is a pair-marked step followed by a plain Grover step.
inline walk_state alternating_run_from(walk_state s, const extended_config& cfg, unsigned r,
                                       query_ledger& ledger) {
    require_shape(s, cfg.n_prime(), cfg.n_prime(), "alternating_run");
    for (unsigned i = 0; i < r; ++i) {
        apply_pair_marked_coin(s, cfg, ledger);
        apply_shift(s);
        unperturbed_step(s);
    }
    return s;
}

inline walk_state alternating_run(const extended_config& cfg, unsigned r, start_state start,
                                  query_ledger& ledger) {
    return alternating_run_from(extended_start(cfg, start), cfg, r, ledger);
}

// U'^(+)^steps, the image-only perturbed walk on the (n+1)-cube.
inline walk_state extended_run(const extended_config& cfg, unsigned steps, start_state start,
                               query_ledger& ledger) {
    return run_from(extended_start(cfg, start), extended_walk_config(cfg), steps, ledger);
}

// X: flips the appended bit (bit 0) of every vertex label.
inline walk_state flip_last_bit(const walk_state& s) {
    walk_state out(s.coin_dim(), s.vertex_bits());
    for (unsigned d = 0; d < s.coin_dim(); ++d) {
        auto src = s.direction(d);
        auto dst = out.direction(d);
        for (vertex_t y = 0; y < src.size(); ++y) {
            dst[y ^ 1] = src[y];
        }
    }
    return out;
}

// Probability of each original vertex when bit 0 of the extended label is not measured.
inline distribution marginal_ignoring_last_bit(const distribution& extended) {
    distribution out;
    out.coin_dim = extended.coin_dim;
    out.vertex_bits = extended.vertex_bits - 1;
    out.per_vertex.resize(extended.per_vertex.size() / 2);
    for (std::size_t z = 0; z < out.per_vertex.size(); ++z) {
        out.per_vertex[z] = extended.per_vertex[2 * z] + extended.per_vertex[2 * z + 1];
    }
    return out;
}

/// Maps an extended-cube state onto the self-loop walk's space.
///
/// Self-loop direction d < n is extended direction d + 1 and self-loop
/// direction n is extended direction 0 (the appended bit). Amplitudes are the
/// X-symmetric combination (a(2z) + a(2z+1)) / sqrt(2), which for an
/// X-invariant state is sqrt(2) a(2z).
inline walk_state fold_extended(const walk_state& s) {
    if (s.coin_dim() != s.vertex_bits() || s.vertex_bits() < 3) {
        throw std::invalid_argument("fold_extended: expected an (n+1)-cube state with n >= 2");
    }
    const unsigned n = s.vertex_bits() - 1;
    walk_state out(n + 1, n);
    const double scale = 1.0 / std::sqrt(2.0);
    for (unsigned d = 0; d <= n; ++d) {
        auto src = s.direction(d == n ? 0 : d + 1);
        auto dst = out.direction(d);
        for (vertex_t z = 0; z < dst.size(); ++z) {
            dst[z] = scale * (src[2 * z] + src[2 * z + 1]);
        }
    }
    return out;
}

// Alternating self-loop walk from the uniform state; r walk queries.
inline walk_state selfloop_run(const self_loop_config& cfg, unsigned r, query_ledger& ledger) {
    walk_state s = uniform_state(cfg.coin_dim(), cfg.n);
    for (unsigned i = 0; i < r; ++i) {
        apply_marked_coin(s, cfg.marked_original);
        ledger.record_walk();
        apply_shift(s);
        unperturbed_step(s);
    }
    return s;
}

// floor(t_f(n + 1) / 2).
inline unsigned optimal_query_count(unsigned n) {
    if (n < 2) {
        throw std::invalid_argument("optimal_query_count: n must be at least 2");
    }
    return optimal_steps(n + 1) / 2;
}

// round((pi/4) sqrt(2^n)), the Grover iteration count.
inline unsigned grover_query_estimate(unsigned n) {
    return static_cast<unsigned>(
        std::floor(std::numbers::pi / 4.0 * std::sqrt(std::ldexp(1.0, static_cast<int>(n))) + 0.5));
}

/// X-symmetry of the alternating walk: X psi_0 = psi_0 exactly,
/// X psi_0^(e) = psi_0^(o), and X commutes with U and U'' on random states.
inline check_report check_x_symmetry(const extended_config& cfg, unsigned trials, rng& gen) {
    const unsigned np = cfg.n_prime();
    const walk_state uniform = extended_start(cfg, start_state::uniform);
    const walk_state even = extended_start(cfg, start_state::even_projected);
    const walk_state odd = std::sqrt(2.0) * project(uniform, {parity_class::odd, 0});

    check_report report{"x-symmetry", {}};
    report.checks.push_back({"X psi0 = psi0", cfg.n, std::nullopt, std::nullopt,
                             max_abs_difference(flip_last_bit(uniform), uniform), relation::at_most,
                             0.0});
    report.checks.push_back({"X psi0e = psi0o", cfg.n, std::nullopt, std::nullopt,
                             max_abs_difference(flip_last_bit(even), odd), relation::at_most, 1e-12});

    query_ledger scratch;
    auto plain = [](walk_state s) {
        unperturbed_step(s);
        return s;
    };
    auto pair_marked = [&](walk_state s) {
        apply_pair_marked_coin(s, cfg, scratch);
        apply_shift(s);
        return s;
    };
    detail::worst_case with_plain("[X, U] = 0", cfg.n, 1e-10);
    detail::worst_case with_pair("[X, U''] = 0", cfg.n, 1e-10);
    for (unsigned i = 0; i < trials; ++i) {
        const walk_state r = random_state(np, np, gen);
        with_plain.observe(distance(flip_last_bit(plain(r)), plain(flip_last_bit(r))));
        with_pair.observe(distance(flip_last_bit(pair_marked(r)), pair_marked(flip_last_bit(r))));
    }
    report.checks.push_back(with_plain.result());
    report.checks.push_back(with_pair.result());
    return report;
}

// C' P_e = C'' P_e: on even states the image-only and pair-marked coins agree.
inline check_report check_coin_factorization(const extended_config& cfg, unsigned trials, rng& gen) {
    const unsigned np = cfg.n_prime();
    detail::worst_case agree("C' P_e = C'' P_e", cfg.n, 1e-12);
    for (unsigned i = 0; i < trials; ++i) {
        const walk_state r = project(random_state(np, np, gen), {parity_class::even, 0});
        walk_state image_only = r;
        apply_marked_coin(image_only, cfg.marked_extended);
        walk_state pair = r;
        apply_marked_coin(pair, cfg.marked_original, 1);
        agree.observe(distance(image_only, pair));
    }
    return check_report{"coin-factorization", {agree.result()}};
}

/// U'^(+)^(2r) psi_0^(e) = (U U'')^r psi_0^(e) for r = 0..r_max, and
/// (U U'')^r psi_0 = (X + 1)/sqrt(2) (U U'')^r psi_0^(e).
inline check_report check_alternating_equivalence(const extended_config& cfg, unsigned r_max) {
    detail::worst_case from_even("U'^2r psi0e = (U U'')^r psi0e", cfg.n, 1e-12);
    detail::worst_case from_uniform("(U U'')^r psi0 = (X+1)/sqrt2 (U U'')^r psi0e", cfg.n, 1e-12);
    query_ledger scratch;
    walk_state single = extended_start(cfg, start_state::even_projected);
    walk_state alternating = single;
    walk_state uniform = extended_start(cfg, start_state::uniform);
    const walk_config single_cfg = extended_walk_config(cfg);
    for (unsigned r = 0; r <= r_max; ++r) {
        if (r > 0) {
            single = run_from(std::move(single), single_cfg, 2, scratch);
            alternating = alternating_run_from(std::move(alternating), cfg, 1, scratch);
            uniform = alternating_run_from(std::move(uniform), cfg, 1, scratch);
        }
        from_even.observe(max_abs_difference(single, alternating), r);
        const walk_state symmetrized =
            (1.0 / std::sqrt(2.0)) * (flip_last_bit(alternating) + alternating);
        from_uniform.observe(max_abs_difference(uniform, symmetrized), r);
    }
    return check_report{"alternating-equivalence", {from_even.result(), from_uniform.result()}};
}

struct image_split {
    double image = 0.0;        // uniform start, probability at 2x + p(x)
    double anti_image = 0.0;   // uniform start, probability at (2x + p(x)) ^ 1
    double even_image = 0.0;   // even-projected start, probability at the image
};

inline image_split image_probabilities(const extended_config& cfg, unsigned r, vertex_t target) {
    query_ledger scratch;
    const vertex_t image = embed(target, cfg.n);
    const auto uniform = vertex_distribution(alternating_run(cfg, r, start_state::uniform, scratch));
    const auto even =
        vertex_distribution(alternating_run(cfg, r, start_state::even_projected, scratch));
    return {uniform.per_vertex[image], uniform.per_vertex[image ^ 1], even.per_vertex[image]};
}

/// Image/anti-image split and the storage reduction for r = 0..r_max:
/// the self-loop walk equals the folded extended walk elementwise, so their
/// vertex distributions agree with the last-bit marginal.
inline check_report check_self_loop_reduction(const extended_config& cfg, unsigned r_max) {
    const self_loop_config loop{cfg.n, cfg.marked_original};
    detail::worst_case folded("self-loop state = fold(extended state)", cfg.n, 1e-12);
    detail::worst_case marginal("self-loop distribution = last-bit marginal", cfg.n, 1e-12);
    detail::worst_case split("P(image) = P(anti-image)", cfg.n, 1e-12);
    detail::worst_case total("P(image) + P(anti-image) = P_even(image)", cfg.n, 1e-12);
    query_ledger scratch;
    walk_state extended = extended_start(cfg, start_state::uniform);
    walk_state even = extended_start(cfg, start_state::even_projected);
    walk_state reduced = selfloop_run(loop, 0, scratch);
    for (unsigned r = 0; r <= r_max; ++r) {
        if (r > 0) {
            extended = alternating_run_from(std::move(extended), cfg, 1, scratch);
            even = alternating_run_from(std::move(even), cfg, 1, scratch);
            apply_marked_coin(reduced, loop.marked_original);
            apply_shift(reduced);
            unperturbed_step(reduced);
        }
        folded.observe(max_abs_difference(reduced, fold_extended(extended)), r);
        const auto ext_dist = vertex_distribution(extended);
        const auto even_dist = vertex_distribution(even);
        const auto reduced_dist = vertex_distribution(reduced);
        const auto margin = marginal_ignoring_last_bit(ext_dist);
        double worst = 0.0;
        for (std::size_t z = 0; z < margin.per_vertex.size(); ++z) {
            worst = std::max(worst, std::abs(margin.per_vertex[z] - reduced_dist.per_vertex[z]));
        }
        marginal.observe(worst, r);
        for (vertex_t m : cfg.marked_extended) {
            split.observe(std::abs(ext_dist.per_vertex[m] - ext_dist.per_vertex[m ^ 1]), r);
        }
        if (cfg.marked_extended.size() == 1) {
            const vertex_t m = cfg.marked_extended.front();
            total.observe(
                std::abs(ext_dist.per_vertex[m] + ext_dist.per_vertex[m ^ 1] - even_dist.per_vertex[m]),
                r);
        }
    }
    check_report report{"self-loop-reduction", {folded.result(), marginal.result(), split.result()}};
    if (total.seen()) {
        report.checks.push_back(total.result());
    }
    return report;
}

struct multi_target_report {
    unsigned n = 0;
    unsigned steps = 0;
    double from_uniform = 0.0;  // summed image probability from psi_0
    double from_even = 0.0;     // summed image probability from psi_0^(e)
    check_report checks;
};

/// With m marked vertices, every (d, image) probability from psi_0^(e) is
/// exactly twice the one from psi_0 after 2r steps of the image-marking walk.
inline multi_target_report multi_target_factor_two(const extended_config& cfg, unsigned r) {
    multi_target_report out;
    out.n = cfg.n;
    out.steps = 2 * r;
    query_ledger scratch;
    const walk_state uniform = extended_run(cfg, out.steps, start_state::uniform, scratch);
    const walk_state even = extended_run(cfg, out.steps, start_state::even_projected, scratch);
    detail::worst_case per_coin("|<d,x'|psi_e>|^2 = 2 |<d,x'|psi>|^2", cfg.n, 1e-12);
    for (vertex_t m : cfg.marked_extended) {
        for (unsigned d = 0; d < cfg.n_prime(); ++d) {
            const double pu = std::norm(uniform(d, m));
            const double pe = std::norm(even(d, m));
            out.from_uniform += pu;
            out.from_even += pe;
            per_coin.observe(std::abs(pe - 2.0 * pu), out.steps);
        }
    }
    out.checks.suite = "multi-target";
    out.checks.checks.push_back(per_coin.result());
    out.checks.checks.push_back({"sum P_e(images) = 2 sum P(images)", cfg.n, out.steps,
                                 std::nullopt, std::abs(out.from_even - 2.0 * out.from_uniform),
                                 relation::at_most, 1e-12});
    return out;
}

}  // namespace qwsearch
