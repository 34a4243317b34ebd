#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwsearch/hypercube_walk.hpp"
#include "support/dense_oracle.hpp"

using namespace qwsearch;
using Catch::Approx;

TEST_CASE("walk_config validation", "[walk][errors]") {
    CHECK_NOTHROW(make_config(2, {3}));
    CHECK_THROWS_AS(make_config(1, {0}), std::invalid_argument);
    CHECK_THROWS_AS(make_config(4, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_config(4, {16}), std::out_of_range);
    CHECK_THROWS_AS(make_config(4, {3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(make_config(max_walk_dimension + 1, {0}), capacity_error);
}

TEST_CASE("initial_state is the uniform superposition", "[walk]") {
    const auto s = initial_state(make_config(2, {0}));
    REQUIRE(s.size() == 8);
    for (const auto& a : s.amplitudes()) {
        CHECK(a.real() == Approx(1.0 / std::sqrt(8.0)).margin(1e-15));
        CHECK(a.imag() == 0.0);
    }
    for (unsigned n = 2; n <= 10; ++n) {
        const auto psi = initial_state(make_config(n, {0}));
        CHECK(std::abs(norm_squared(psi) - 1.0) <= 1e-12);
        const auto dist = vertex_distribution(psi);
        for (double p : dist.per_vertex) {
            CHECK(std::abs(p - std::ldexp(1.0, -static_cast<int>(n))) <= 1e-15);
        }
    }
}

TEST_CASE("apply_shift moves |d, x> to |d, x ^ 2^d>", "[walk][shift]") {
    for (unsigned n = 2; n <= 6; ++n) {
        auto s = basis_state(n, n, 0, 0);
        apply_shift(s, make_config(n, {0}));
        CHECK(s(0, 1) == amplitude{1.0});
    }
    auto s = basis_state(3, 3, 2, 5);
    apply_shift(s, make_config(3, {0}));
    CHECK(s(2, 1) == amplitude{1.0});
    CHECK(norm_squared(s) == 1.0);

    SECTION("involution is bit-exact") {
        rng gen(5);
        for (unsigned n = 2; n <= 10; ++n) {
            const auto r = random_state(n, n, gen);
            auto twice = r;
            apply_shift(twice);
            apply_shift(twice);
            CHECK(twice == r);
        }
    }
    SECTION("self-loop directions stay put") {
        auto loop = basis_state(4, 3, 3, 6);
        apply_shift(loop);
        CHECK(loop(3, 6) == amplitude{1.0});
    }
    SECTION("dimension mismatch") {
        auto wrong = make_state(3, 4);
        CHECK_THROWS_AS(apply_shift(wrong, make_config(4, {0})), std::invalid_argument);
    }
}

TEST_CASE("apply_coin", "[walk][coin]") {
    const auto cfg = make_config(4, {9});
    query_ledger ledger;

    SECTION("Grover fixes the symmetric coin vector at unmarked vertices") {
        walk_state s(4, 4);
        for (unsigned d = 0; d < 4; ++d) {
            s(d, 3) = 0.5;
        }
        const auto before = s;
        apply_coin(s, cfg, true, ledger);
        CHECK(max_abs_difference(s, before) <= 1e-15);
    }
    SECTION("marked coin block is negated") {
        rng gen(1);
        walk_state s = random_state(4, 4, gen);
        const auto before = s;
        apply_coin(s, cfg, true, ledger);
        for (unsigned d = 0; d < 4; ++d) {
            CHECK(s(d, 9) == -before(d, 9));
        }
    }
    SECTION("|d=0> at an unmarked vertex maps to 2/n - delta") {
        auto s = basis_state(4, 4, 0, 2);
        apply_coin(s, cfg, false, ledger);
        CHECK(s(0, 2).real() == Approx(-0.5).margin(1e-15));
        for (unsigned d = 1; d < 4; ++d) {
            CHECK(s(d, 2).real() == Approx(0.5).margin(1e-15));
        }
    }
    SECTION("only perturbed applications count as walk queries") {
        walk_state s = initial_state(cfg);
        apply_coin(s, cfg, false, ledger);
        CHECK(ledger.walk_queries == 0);
        apply_coin(s, cfg, true, ledger);
        apply_coin(s, cfg, true, ledger);
        CHECK(ledger.walk_queries == 2);
        CHECK(ledger.verify_queries == 0);
        CHECK(ledger.total() == 2);
    }
}

TEST_CASE("coin never moves amplitude between vertices", "[walk][coin][property]") {
    rng gen(17);
    for (unsigned n = 2; n <= 8; ++n) {
        const auto cfg = make_config(n, {gen.next() % (vertex_t{1} << n)});
        for (vertex_t x = 0; x < cfg.vertex_count(); x += 1 + cfg.vertex_count() / 7) {
            const auto d0 = static_cast<unsigned>(gen.next() % n);
            auto s = basis_state(n, n, d0, x);
            query_ledger ledger;
            apply_coin(s, cfg, true, ledger);
            for (unsigned d = 0; d < n; ++d) {
                for (vertex_t y = 0; y < cfg.vertex_count(); ++y) {
                    if (y != x) {
                        CHECK(s(d, y) == amplitude{});
                    }
                }
            }
        }
    }
}

TEST_CASE("multi-target coin negates exactly the marked blocks", "[walk][coin][property]") {
    rng gen(23);
    for (int trial = 0; trial < 20; ++trial) {
        const unsigned n = 3 + static_cast<unsigned>(gen.next() % 5);
        const std::size_t m = 1 + gen.next() % 4;
        std::vector<vertex_t> marked;
        while (marked.size() < m) {
            const vertex_t x = gen.next() % (vertex_t{1} << n);
            if (std::find(marked.begin(), marked.end(), x) == marked.end()) {
                marked.push_back(x);
            }
        }
        const auto cfg = make_config(n, marked);
        const auto r = random_state(n, n, gen);
        auto perturbed = r;
        query_ledger ledger;
        apply_coin(perturbed, cfg, true, ledger);
        auto plain = r;
        apply_grover_coin(plain);
        for (vertex_t x = 0; x < cfg.vertex_count(); ++x) {
            const bool hit = std::find(marked.begin(), marked.end(), x) != marked.end();
            for (unsigned d = 0; d < n; ++d) {
                CHECK(perturbed(d, x) == (hit ? -r(d, x) : plain(d, x)));
            }
        }
    }
}

TEST_CASE("step matches the dense U' = S C'", "[walk][step]") {
    const unsigned n = 3;
    const auto cfg = make_config(n, {0});
    const dense_oracle::MatrixXcd u = dense_oracle::shift(n, n) * dense_oracle::coin(n, n, {0});
    auto s = initial_state(cfg);
    query_ledger ledger;
    step(s, cfg, ledger);
    CHECK(dense_oracle::max_abs_difference(u * dense_oracle::uniform(n, n), s) <= 1e-14);
    CHECK(ledger.walk_queries == 1);

    SECTION("multi-target, several steps") {
        const auto multi = make_config(4, {2, 7, 12});
        const dense_oracle::MatrixXcd um = dense_oracle::shift(4, 4) * dense_oracle::coin(4, 4, {2, 7, 12});
        query_ledger l;
        const auto got = run(multi, 9, l);
        CHECK(dense_oracle::max_abs_difference(dense_oracle::power_apply(um, 9, dense_oracle::uniform(4, 4)), got) <=
              1e-13);
        CHECK(l.walk_queries == 9);
    }
}

TEST_CASE("step is unitary", "[walk][property]") {
    rng gen(31);
    for (unsigned n = 2; n <= 10; ++n) {
        const auto cfg = make_config(n, {gen.next() % (vertex_t{1} << n)});
        for (int trial = 0; trial < 10; ++trial) {
            auto s = random_state(n, n, gen);
            query_ledger ledger;
            step(s, cfg, ledger);
            CHECK(std::abs(norm_squared(s) - 1.0) <= 1e-10);
            unperturbed_step(s);
            CHECK(std::abs(norm_squared(s) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("optimal_steps is the nearest integer to (pi/2) sqrt(2^(n-1))", "[walk]") {
    CHECK(optimal_steps(2) == 2);
    CHECK(optimal_steps(5) == 6);
    CHECK(optimal_steps(9) == 25);
    CHECK(optimal_steps(12) == 71);
    CHECK(even_optimal_steps(9) == 24);
    CHECK(odd_optimal_steps(9) == 25);
    CHECK(even_optimal_steps(5) == 6);
    CHECK(odd_optimal_steps(5) == 7);
    CHECK_THROWS_AS(optimal_steps(1), std::invalid_argument);
    for (unsigned n = 2; n <= 30; ++n) {
        const double exact = std::numbers::pi / 2 * std::sqrt(std::ldexp(1.0, static_cast<int>(n) - 1));
        CHECK(std::abs(optimal_steps(n) - exact) <= 0.5);
    }
}

TEST_CASE("run", "[walk][run]") {
    SECTION("t = 0 is the initial state") {
        const auto cfg = make_config(4, {5});
        query_ledger ledger;
        CHECK(run(cfg, 0, ledger) == initial_state(cfg));
        CHECK(ledger.walk_queries == 0);
    }
    SECTION("ledger counts t walk queries") {
        const auto cfg = make_config(5, {5});
        query_ledger ledger;
        run(cfg, 13, ledger);
        CHECK(ledger.walk_queries == 13);
    }
    SECTION("n = 5 at t_f peaks at the target close to 1/2") {
        const auto dist = vertex_distribution(run(make_config(5, {0}), optimal_steps(5)));
        const auto peak = std::max_element(dist.per_vertex.begin(), dist.per_vertex.end());
        CHECK(peak - dist.per_vertex.begin() == 0);
        CHECK(*peak >= 0.3);
        CHECK(*peak <= 0.6);
    }
    SECTION("n = 7, target 13 equals target 0 by relabeling") {
        const unsigned t = optimal_steps(7);
        const auto shifted = vertex_distribution(run(make_config(7, {13}), t));
        const auto origin = vertex_distribution(run(make_config(7, {0}), t));
        CHECK(std::abs(shifted.per_vertex[13] - origin.per_vertex[0]) <= 1e-12);
    }
}

TEST_CASE("relabeling covariance x -> x ^ y", "[walk][property]") {
    rng gen(41);
    for (unsigned n = 2; n <= 9; ++n) {
        const vertex_t y = gen.next() % (vertex_t{1} << n);
        const unsigned t = static_cast<unsigned>(gen.next() % (2 * optimal_steps(n) + 1));
        const auto moved = vertex_distribution(run(make_config(n, {y}), t));
        const auto origin = vertex_distribution(run(make_config(n, {0}), t));
        double worst = 0.0;
        for (vertex_t x = 0; x < origin.per_vertex.size(); ++x) {
            worst = std::max(worst, std::abs(moved.per_vertex[x ^ y] - origin.per_vertex[x]));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("neg-identity as c0 is supported by the coin interface", "[walk][coin]") {
    walk_config cfg = make_config(3, {1});
    cfg.c0 = coin_kind::neg_identity;
    cfg.c1 = coin_kind::grover;
    rng gen(3);
    const auto r = random_state(3, 3, gen);
    auto s = r;
    query_ledger ledger;
    apply_coin(s, cfg, true, ledger);
    const dense_oracle::MatrixXcd dense = dense_oracle::coin(3, 3, {});
    const dense_oracle::VectorXcd grover_applied = dense * dense_oracle::to_vector(r);
    for (vertex_t x = 0; x < 8; ++x) {
        for (unsigned d = 0; d < 3; ++d) {
            const auto expected = x == 1 ? grover_applied(dense_oracle::index(d, x, 3)) : -r(d, x);
            CHECK(std::abs(s(d, x) - expected) <= 1e-15);
        }
    }
}
