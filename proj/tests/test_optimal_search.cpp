#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qwsearch/optimal_search.hpp"
#include "qwsearch/reference_sweep.hpp"
#include "support/dense_oracle.hpp"

using namespace qwsearch;
using Catch::Approx;

namespace {

void require_passed(const check_report& r) {
    for (const auto& c : r.checks) {
        INFO(r.suite << ": " << c.check << " n=" << c.n << " value=" << c.value << " bound=" << c.bound);
        CHECK(c.passed());
    }
}

}  // namespace

TEST_CASE("embed and unembed", "[optimal][embed]") {
    CHECK(embed(0, 4) == 0);
    CHECK(embed(1, 4) == 3);
    CHECK(embed(6, 4) == 12);
    CHECK(unembed(12, 4) == vertex_t{6});
    CHECK(unembed(3, 4) == vertex_t{1});
    CHECK_FALSE(unembed(1, 4).has_value());
    CHECK_THROWS_AS(embed(16, 4), std::out_of_range);
    CHECK_THROWS_AS(unembed(32, 4), std::out_of_range);

    SECTION("injective and parity-even, n <= 16") {
        for (unsigned n = 1; n <= 16; ++n) {
            std::vector<bool> hit(std::size_t{1} << (n + 1), false);
            bool ok = true;
            for (vertex_t x = 0; x < (vertex_t{1} << n); ++x) {
                const vertex_t y = embed(x, n);
                ok = ok && parity(y) == 0 && unembed(y, n) == x && !hit[y];
                hit[y] = true;
            }
            INFO("n = " << n);
            CHECK(ok);
        }
    }
}

TEST_CASE("extended_config caches the images", "[optimal]") {
    const auto cfg = make_extended_config(4, {1, 6});
    CHECK(cfg.n_prime() == 5);
    CHECK(cfg.marked_extended == std::vector<vertex_t>{3, 12});
    for (vertex_t y : cfg.marked_extended) {
        CHECK(parity(y) == 0);
    }
    CHECK_THROWS_AS(make_extended_config(4, {16}), std::out_of_range);
    CHECK_THROWS_AS(make_extended_config(max_walk_dimension, {0}), capacity_error);
}

TEST_CASE("pair-marked coin matches the dense definition", "[optimal][coin]") {
    const auto cfg = make_extended_config(3, {5});
    rng gen(2);
    const auto r = random_state(4, 4, gen);
    auto s = r;
    query_ledger ledger;
    apply_pair_marked_coin(s, cfg, ledger);
    const dense_oracle::MatrixXcd c = dense_oracle::coin(4, 4, {5}, 1);
    const dense_oracle::VectorXcd expected = c * dense_oracle::to_vector(r);
    CHECK(dense_oracle::max_abs_difference(expected, s) <= 1e-15);
    CHECK(ledger.walk_queries == 1);
    // image 2*5 + 0 = 10 and anti-image 11 are both negated
    CHECK(s(2, 10) == -r(2, 10));
    CHECK(s(2, 11) == -r(2, 11));
}

TEST_CASE("alternating_run", "[optimal][appendix-b]") {
    SECTION("n = 4, even start concentrates on the image") {
        const auto cfg = make_extended_config(4, {0});
        const unsigned r = optimal_query_count(4);
        CHECK(r == 3);
        query_ledger ledger;
        const auto dist = vertex_distribution(alternating_run(cfg, r, start_state::even_projected, ledger));
        CHECK(ledger.walk_queries == r);
        const auto peak = std::max_element(dist.per_vertex.begin(), dist.per_vertex.end());
        CHECK(peak - dist.per_vertex.begin() == 0);
    }
    SECTION("uniform start splits evenly between image and anti-image") {
        for (unsigned n = 3; n <= 6; ++n) {
            const auto cfg = make_extended_config(n, {(vertex_t{1} << n) - 3});
            const auto split = image_probabilities(cfg, optimal_query_count(n), cfg.marked_original.front());
            CHECK(std::abs(split.image - split.anti_image) <= 1e-12);
            CHECK(std::abs(split.image + split.anti_image - split.even_image) <= 1e-12);
        }
    }
    SECTION("(U U'')^r equals U'^(2r) from the even start, n <= 6, r <= 10") {
        for (unsigned n = 2; n <= 5; ++n) {
            require_passed(check_alternating_equivalence(make_extended_config(n, {1}), 10));
        }
    }
    SECTION("shape is checked") {
        query_ledger ledger;
        CHECK_THROWS_AS(alternating_run_from(uniform_state(4, 4), make_extended_config(4, {0}), 1, ledger),
                        std::invalid_argument);
    }
}

TEST_CASE("X symmetry and coin factorization", "[optimal][appendix-b]") {
    rng gen(21);
    for (unsigned n = 2; n <= 6; ++n) {
        const auto cfg = make_extended_config(n, {gen.next() % (vertex_t{1} << n)});
        require_passed(check_x_symmetry(cfg, 10, gen));
        require_passed(check_coin_factorization(cfg, 10, gen));
    }
    const auto cfg = make_extended_config(3, {2});
    const auto uniform = extended_start(cfg, start_state::uniform);
    CHECK(flip_last_bit(uniform) == uniform);
    CHECK(flip_last_bit(flip_last_bit(basis_state(4, 4, 1, 6))) == basis_state(4, 4, 1, 6));
    CHECK(flip_last_bit(basis_state(4, 4, 1, 6)) == basis_state(4, 4, 1, 7));
}

TEST_CASE("selfloop_run", "[optimal][self-loop]") {
    SECTION("r = 0 is uniform over 2^n vertices") {
        query_ledger ledger;
        const auto dist = vertex_distribution(selfloop_run(make_self_loop_config(5, {3}), 0, ledger));
        for (double p : dist.per_vertex) {
            CHECK(p == Approx(1.0 / 32).margin(1e-15));
        }
        CHECK(ledger.walk_queries == 0);
    }
    SECTION("self-loop direction stays put, the rest move") {
        auto s = basis_state(5, 4, 4, 9);
        apply_shift(s);
        CHECK(s(4, 9) == amplitude{1.0});
    }
    SECTION("n = 4: target probability equals the extended image plus anti-image") {
        const auto ext = make_extended_config(4, {11});
        const unsigned r = optimal_query_count(4);
        query_ledger ledger;
        const auto reduced = vertex_distribution(selfloop_run(make_self_loop_config(4, {11}), r, ledger));
        const auto split = image_probabilities(ext, r, 11);
        CHECK(std::abs(reduced.per_vertex[11] - (split.image + split.anti_image)) <= 1e-12);
        CHECK(ledger.walk_queries == r);
    }
    SECTION("norm preserved and reduction holds for every r") {
        for (unsigned n = 2; n <= 6; ++n) {
            const auto ext = make_extended_config(n, {1});
            require_passed(check_self_loop_reduction(ext, 2 * optimal_query_count(n)));
            query_ledger ledger;
            const auto s = selfloop_run(make_self_loop_config(n, {1}), 7, ledger);
            CHECK(std::abs(norm_squared(s) - 1.0) <= 1e-10);
        }
        require_passed(check_self_loop_reduction(make_extended_config(5, {4, 9, 30}), 8));
    }
    SECTION("n = 9 succeeds above the frozen threshold with 18 queries") {
        query_ledger ledger;
        const unsigned r = optimal_query_count(9);
        const auto dist = vertex_distribution(selfloop_run(make_self_loop_config(9, {0}), r, ledger));
        CHECK(r == 18);
        CHECK(ledger.walk_queries == 18);
        CHECK(dist.per_vertex[0] >= 0.8);
        CHECK(dist.per_vertex[0] == Approx(frozen::at(9).optimal_success).margin(1e-10));
    }
}

TEST_CASE("fold_extended and marginal_ignoring_last_bit", "[optimal]") {
    rng gen(6);
    const auto s = random_state(4, 4, gen);
    const auto folded = fold_extended(s);
    CHECK(folded.coin_dim() == 4);
    CHECK(folded.vertex_bits() == 3);
    // extended direction 0 becomes the self-loop direction 3
    CHECK(std::abs(folded(3, 2) - (s(0, 4) + s(0, 5)) / std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(folded(0, 2) - (s(1, 4) + s(1, 5)) / std::sqrt(2.0)) <= 1e-15);

    const auto dist = vertex_distribution(s);
    const auto margin = marginal_ignoring_last_bit(dist);
    REQUIRE(margin.per_vertex.size() == 8);
    CHECK(margin.per_vertex[5] == Approx(dist.per_vertex[10] + dist.per_vertex[11]));
}

TEST_CASE("optimal_query_count", "[optimal]") {
    CHECK(optimal_query_count(9) == 18);
    CHECK(optimal_query_count(4) == 3);
    CHECK(grover_query_estimate(9) == 18);
    CHECK_THROWS_AS(optimal_query_count(1), std::invalid_argument);
    for (unsigned n = 2; n <= 24; ++n) {
        INFO("n = " << n);
        CHECK(std::abs(static_cast<int>(optimal_query_count(n)) - static_cast<int>(grover_query_estimate(n))) <= 1);
    }
    for (unsigned n = 10; n <= 24; ++n) {
        const double ratio = static_cast<double>(optimal_query_count(n)) / optimal_steps(n);
        CHECK(std::abs(ratio - 1.0 / std::sqrt(2.0)) <= 0.1);
    }
}

TEST_CASE("multi-target factor two", "[optimal][multi]") {
    SECTION("n = 10, m = 2") {
        const auto cfg = make_extended_config(10, {37, 901});
        const auto report = multi_target_factor_two(cfg, optimal_query_count(10));
        require_passed(report.checks);
        CHECK(report.steps == 2 * optimal_query_count(10));
        CHECK(report.from_even > 0.0);
    }
    SECTION("small cases, m up to 4") {
        rng gen(77);
        for (unsigned m = 1; m <= 4; ++m) {
            std::vector<vertex_t> marked;
            while (marked.size() < m) {
                const vertex_t x = gen.next() % 64;
                if (std::find(marked.begin(), marked.end(), x) == marked.end()) {
                    marked.push_back(x);
                }
            }
            require_passed(multi_target_factor_two(make_extended_config(6, marked), 5).checks);
        }
    }
}
