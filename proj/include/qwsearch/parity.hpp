// parity.hpp
// Even/odd bipartition of the search walk.
//
// Parity is taken of x ^ target. The shift flips exactly one vertex bit and
// the coins act per vertex, so every step maps the even subspace onto the
// odd one and back. Everything below is a consequence of that.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwsearch/collapsed_walk.hpp"
#include "qwsearch/hypercube_walk.hpp"
#include "qwsearch/reference_sweep.hpp"
#include "qwsearch/report.hpp"
#include "qwsearch/state.hpp"

namespace qwsearch {

enum class parity_class { even, odd };

inline const char* to_string(parity_class p) noexcept { return p == parity_class::even ? "even" : "odd"; }

struct parity_projector {
    parity_class which = parity_class::even;
    vertex_t target = 0;

    bool keeps(vertex_t x) const noexcept {
        return parity(x ^ target) == (which == parity_class::even ? 0u : 1u);
    }
};

// Zeroes amplitudes on vertices of the other parity. Not renormalized.
inline walk_state project(walk_state s, const parity_projector& p) {
    for (unsigned d = 0; d < s.coin_dim(); ++d) {
        auto block = s.direction(d);
        for (vertex_t x = 0; x < block.size(); ++x) {
            if (!p.keeps(x)) {
                block[x] = 0.0;
            }
        }
    }
    return s;
}

inline vertex_t single_target(const walk_config& cfg, const char* what) {
    validate(cfg);
    if (cfg.marked.size() != 1) {
        throw std::invalid_argument(std::string(what) + ": requires exactly one marked vertex");
    }
    return cfg.marked.front();
}

// sqrt(2) P psi_0 with parity relative to the single marked vertex.
inline walk_state parity_initial(const walk_config& cfg, parity_class which) {
    const vertex_t target = single_target(cfg, "parity_initial");
    return std::sqrt(2.0) * project(initial_state(cfg), {which, target});
}

/// Residuals of P_o U r = U P_e r and P_e U r = U P_o r on random states r,
/// for U = S C' (perturbed) or S C0.
inline check_report check_subspace_swap(const walk_config& cfg, unsigned trials, rng& gen,
                                        bool perturbed = true) {
    const vertex_t target = single_target(cfg, "check_subspace_swap");
    const parity_projector even{parity_class::even, target};
    const parity_projector odd{parity_class::odd, target};
    query_ledger scratch;
    auto evolve = [&](walk_state s) {
        apply_coin(s, cfg, perturbed, scratch);
        apply_shift(s);
        return s;
    };
    const std::string label = perturbed ? "U'" : "U";
    detail::worst_case odd_after(label + ": P_o U r = U P_e r", cfg.n, 1e-10);
    detail::worst_case even_after(label + ": P_e U r = U P_o r", cfg.n, 1e-10);
    for (unsigned i = 0; i < trials; ++i) {
        const walk_state r = random_state(cfg.n, cfg.n, gen);
        const walk_state moved = evolve(r);
        odd_after.observe(distance(project(moved, odd), evolve(project(r, even))));
        even_after.observe(distance(project(moved, even), evolve(project(r, odd))));
    }
    check_report report{"subspace-swap", {}};
    report.checks.push_back(odd_after.result());
    report.checks.push_back(even_after.result());
    return report;
}

// Idempotence, orthogonality and completeness of P_e, P_o on random states.
inline check_report check_projector_algebra(const walk_config& cfg, unsigned trials, rng& gen) {
    const vertex_t target = single_target(cfg, "check_projector_algebra");
    const parity_projector even{parity_class::even, target};
    const parity_projector odd{parity_class::odd, target};
    detail::worst_case idempotent("P^2 = P", cfg.n, 0.0);
    detail::worst_case orthogonal("P_e P_o = 0", cfg.n, 0.0);
    detail::worst_case complete("P_e + P_o = 1", cfg.n, 0.0);
    for (unsigned i = 0; i < trials; ++i) {
        const walk_state r = random_state(cfg.n, cfg.n, gen);
        const walk_state pe = project(r, even);
        const walk_state po = project(r, odd);
        idempotent.observe(std::max(max_abs_difference(project(pe, even), pe),
                                    max_abs_difference(project(po, odd), po)));
        orthogonal.observe(std::sqrt(norm_squared(project(pe, odd))));
        complete.observe(max_abs_difference(pe + po, r));
    }
    check_report report{"projector-algebra", {}};
    report.checks.push_back(idempotent.result());
    report.checks.push_back(orthogonal.result());
    report.checks.push_back(complete.result());
    return report;
}

// U' psi_0^(o) = U psi_0^(o) = psi_0^(e), and psi_0 = (psi_0^(e) + psi_0^(o)) / sqrt(2).
inline check_report check_odd_start_step(const walk_config& cfg) {
    single_target(cfg, "check_odd_start_step");
    const walk_state even = parity_initial(cfg, parity_class::even);
    const walk_state odd = parity_initial(cfg, parity_class::odd);
    query_ledger scratch;
    walk_state perturbed = odd;
    step(perturbed, cfg, scratch);
    walk_state plain = odd;
    unperturbed_step(plain);
    check_report report{"odd-start-step", {}};
    report.checks.push_back({"U' psi_o = psi_e", cfg.n, 1u, std::nullopt,
                             max_abs_difference(perturbed, even), relation::at_most, 1e-12});
    report.checks.push_back({"U psi_o = psi_e", cfg.n, 1u, std::nullopt,
                             max_abs_difference(plain, even), relation::at_most, 1e-12});
    report.checks.push_back({"(psi_e + psi_o)/sqrt2 = psi_0", cfg.n, std::nullopt, std::nullopt,
                             max_abs_difference((1.0 / std::sqrt(2.0)) * (even + odd),
                                                initial_state(cfg)),
                             relation::at_most, 1e-15});
    return report;
}

/// Shell probabilities P[t][x] of the single-target walk for t = 0..t_max,
/// and the checks on them.
struct shell_report {
    unsigned n = 0;
    unsigned t_max = 0;
    std::vector<std::vector<double>> P;
    check_report checks;
};

/// Neighbour-shell inequalities and the step-pairing equalities, evaluated on
/// the collapsed walk, together with each intermediate identity used to
/// derive them (coin unitarity at shells 0 and 1, shift transport between
/// |R,0> and |L,1>).
inline shell_report shell_inequalities(unsigned n, unsigned t_max, double tolerance = 1e-12) {
    if (n < 2) {
        throw std::invalid_argument("shell_inequalities: n must be at least 2");
    }
    const collapsed_trajectory traj = trace_collapsed(n, t_max);
    shell_report out;
    out.n = n;
    out.t_max = t_max;
    for (const auto& a : traj.alpha) {
        out.P.push_back(shells(a).P);
    }
    const auto& P = out.P;

    detail::worst_case p1_ge_p0("P1(t) >= P0(t)", n, tolerance);
    detail::worst_case next_le("P0(t+1) <= P1(t)", n, tolerance);
    detail::worst_case prev_le("P0(t-1) <= P1(t)", n, tolerance);
    detail::worst_case even_eq("P_x(2r) = P_x(2r+1), x even", n, tolerance);
    detail::worst_case odd_eq("P_x(2r) = P_x(2r-1), x odd", n, tolerance);
    detail::worst_case beta_r0("|beta_R0(t)|^2 = |alpha_R0(t)|^2", n, tolerance);
    detail::worst_case beta_l0("beta_L0(t) = 0", n, 0.0);
    detail::worst_case l1_from_r0("alpha_L1(t+1) = beta_R0(t)", n, tolerance);
    detail::worst_case r0_from_l1("alpha_R0(t+1) = beta_L1(t)", n, tolerance);
    detail::worst_case shell1_unitary("|beta_R1|^2 + |beta_L1|^2 = P1", n, tolerance);

    for (unsigned t = 1; t <= t_max; ++t) {
        p1_ge_p0.observe(P[t][0] - P[t][1], t);
        prev_le.observe(P[t - 1][0] - P[t][1], t);
        if (t + 1 <= t_max) {
            next_le.observe(P[t + 1][0] - P[t][1], t);
        }
    }
    for (unsigned t = 0; t <= t_max; t += 2) {
        for (unsigned x = 0; x <= n; ++x) {
            if (x % 2 == 0 && t + 1 <= t_max) {
                even_eq.observe(std::abs(P[t][x] - P[t + 1][x]), t, x);
            }
            if (x % 2 == 1 && t >= 2) {
                odd_eq.observe(std::abs(P[t][x] - P[t - 1][x]), t, x);
            }
        }
    }
    for (unsigned t = 0; t < t_max; ++t) {
        const auto& alpha = traj.alpha[t];
        const auto& beta = traj.beta[t];
        const auto& next = traj.alpha[t + 1];
        beta_r0.observe(std::abs(std::norm(beta.right(0)) - std::norm(alpha.right(0))), t);
        beta_l0.observe(std::abs(beta.left(0)), t);
        l1_from_r0.observe(std::abs(next.left(1) - beta.right(0)), t);
        r0_from_l1.observe(std::abs(next.right(0) - beta.left(1)), t);
        shell1_unitary.observe(
            std::abs(std::norm(beta.right(1)) + std::norm(beta.left(1)) - P[t][1]), t);
    }

    out.checks.suite = "appendix-a";
    for (const auto* w : {&p1_ge_p0, &next_le, &prev_le, &even_eq, &odd_eq, &beta_r0, &beta_l0,
                          &l1_from_r0, &r0_from_l1, &shell1_unitary}) {
        if (w->seen()) {
            out.checks.checks.push_back(w->result());
        }
    }
    return out;
}

struct factor_two_report {
    unsigned n = 0;
    unsigned t_fe = 0;
    double p0_uniform = 0.0;
    double p0_even = 0.0;
    double p0_odd = 0.0;
    check_report checks;
};

/// Target probability after t_fe = 2 floor(t_f / 2) steps from psi_0, psi_0^(e)
/// and psi_0^(o), target at 0.
///
/// The even start doubles the uniform-start probability exactly; the odd
/// start never reaches the target at an even step. For n >= 9 the even-start
/// probability is held to the frozen reference threshold.
inline factor_two_report factor_two_even_start(unsigned n) {
    const walk_config cfg = make_config(n, {0});
    factor_two_report out;
    out.n = n;
    out.t_fe = even_optimal_steps(n);
    query_ledger scratch;
    auto target_probability = [&](walk_state start) {
        return vertex_distribution(run_from(std::move(start), cfg, out.t_fe, scratch)).per_vertex[0];
    };
    out.p0_uniform = target_probability(initial_state(cfg));
    out.p0_even = target_probability(parity_initial(cfg, parity_class::even));
    out.p0_odd = target_probability(parity_initial(cfg, parity_class::odd));

    out.checks.suite = "factor-two";
    out.checks.checks.push_back({"P0e = 2 P0", n, out.t_fe, std::nullopt,
                                 std::abs(out.p0_even - 2.0 * out.p0_uniform), relation::at_most,
                                 1e-12});
    out.checks.checks.push_back({"P0o = 0 at even t", n, out.t_fe, std::nullopt, out.p0_odd,
                                 relation::at_most, 0.0});
    if (n >= 9) {
        out.checks.checks.push_back({"P0e >= frozen threshold", n, out.t_fe, std::nullopt,
                                     out.p0_even, relation::at_least,
                                     frozen::even_start_threshold});
    }
    return out;
}

}  // namespace qwsearch
