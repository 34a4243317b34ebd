// collapsed_walk.hpp
// Single-target search walk reduced to Hamming-weight shells.
//
// With the target at label 0 the walk stays inside the span of the shell
// states |R, x> (coin points to a 0 bit, moving outward) and |L, x> (coin
// points to a 1 bit, moving inward), so n + 1 shells of two amplitudes each
// replace the n 2^n dimensional space.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwsearch/bits.hpp"
#include "qwsearch/hypercube_walk.hpp"
#include "qwsearch/state.hpp"

namespace qwsearch {

/// Shell amplitudes alpha_{R,x}, alpha_{L,x} for x = 0..n.
///
/// Both arrays have n + 1 entries; right[n] and left[0] correspond to no
/// basis state and are kept at exactly zero by every operation here.
class collapsed_state {
public:
    explicit collapsed_state(unsigned n) : n_(n), right_(n + 1), left_(n + 1) {
        if (n < 2 || n > max_collapsed_dimension) {
            throw std::invalid_argument("collapsed_state: n must be in [2, 64], got " +
                                        std::to_string(n));
        }
    }

    unsigned n() const noexcept { return n_; }

    amplitude& right(unsigned x) { return right_.at(x); }
    const amplitude& right(unsigned x) const { return right_.at(x); }
    amplitude& left(unsigned x) { return left_.at(x); }
    const amplitude& left(unsigned x) const { return left_.at(x); }

    friend bool operator==(const collapsed_state&, const collapsed_state&) = default;

private:
    unsigned n_;
    std::vector<amplitude> right_;
    std::vector<amplitude> left_;
};

inline double norm_squared(const collapsed_state& s) noexcept {
    double total = 0.0;
    for (unsigned x = 0; x <= s.n(); ++x) {
        total += std::norm(s.right(x)) + std::norm(s.left(x));
    }
    return total;
}

inline double max_abs_difference(const collapsed_state& a, const collapsed_state& b) {
    if (a.n() != b.n()) {
        throw std::invalid_argument("max_abs_difference: dimension mismatch");
    }
    double worst = 0.0;
    for (unsigned x = 0; x <= a.n(); ++x) {
        worst = std::max({worst, std::abs(a.right(x) - b.right(x)), std::abs(a.left(x) - b.left(x))});
    }
    return worst;
}

namespace detail {

// Number of |d, x> terms in |R, x> and |L, x>.
inline double right_multiplicity(unsigned n, unsigned x) {
    return static_cast<double>(static_cast<uint128>(n - x) * binomial(n, x));
}
inline double left_multiplicity(unsigned n, unsigned x) {
    return static_cast<double>(static_cast<uint128>(x) * binomial(n, x));
}

}  // namespace detail

// Projection of the uniform initial state onto the shell basis.
inline collapsed_state collapsed_initial(unsigned n) {
    collapsed_state s(n);
    const double total = std::ldexp(static_cast<double>(n), static_cast<int>(n));
    for (unsigned x = 0; x < n; ++x) {
        s.right(x) = std::sqrt(detail::right_multiplicity(n, x) / total);
    }
    for (unsigned x = 1; x <= n; ++x) {
        s.left(x) = std::sqrt(detail::left_multiplicity(n, x) / total);
    }
    return s;
}

struct shell_coin {
    double cos_omega;
    double sin_omega;
};

// Grover coin restricted to shell x: cos = 1 - 2x/n, sin = (2/n) sqrt(x (n - x)).
inline shell_coin grover_shell_coin(unsigned n, unsigned x) {
    const double nn = n;
    return {1.0 - 2.0 * x / nn, 2.0 / nn * std::sqrt(static_cast<double>(x) * (n - x))};
}

// Returns the post-coin amplitudes (beta). The perturbed coin is C0 - 2|R,0><R,0|.
inline collapsed_state collapsed_coin(const collapsed_state& s, bool perturbed) {
    collapsed_state out(s.n());
    for (unsigned x = 0; x <= s.n(); ++x) {
        const auto [c, sn] = grover_shell_coin(s.n(), x);
        const amplitude r = s.right(x);
        const amplitude l = s.left(x);
        out.right(x) = c * r + sn * l;
        out.left(x) = sn * r - c * l;
    }
    // The matrix is diagonal at both ends, so the structural zeros survive; pin them exactly.
    out.left(0) = 0.0;
    out.right(s.n()) = 0.0;
    if (perturbed) {
        out.right(0) = -out.right(0);
    }
    return out;
}

// |R, x> <-> |L, x + 1>.
inline collapsed_state collapsed_shift(const collapsed_state& s) {
    collapsed_state out(s.n());
    for (unsigned x = 0; x < s.n(); ++x) {
        out.left(x + 1) = s.right(x);
        out.right(x) = s.left(x + 1);
    }
    return out;
}

inline collapsed_state collapsed_step(const collapsed_state& s, bool perturbed = true) {
    return collapsed_shift(collapsed_coin(s, perturbed));
}

inline collapsed_state collapsed_run(unsigned n, unsigned t, bool perturbed = true) {
    collapsed_state s = collapsed_initial(n);
    for (unsigned i = 0; i < t; ++i) {
        s = collapsed_step(s, perturbed);
    }
    return s;
}

/// P[x] = |alpha_{L,x}|^2 + |alpha_{R,x}|^2: probability of Hamming distance x from the target.
struct shell_distribution {
    std::vector<double> P;
};

inline shell_distribution shells(const collapsed_state& s) {
    shell_distribution out;
    out.P.resize(s.n() + 1);
    for (unsigned x = 0; x <= s.n(); ++x) {
        out.P[x] = std::norm(s.right(x)) + std::norm(s.left(x));
    }
    return out;
}

// Per-vertex probabilities summed by Hamming distance from `target`.
inline shell_distribution shell_marginals(const distribution& dist, vertex_t target = 0) {
    shell_distribution out;
    out.P.assign(dist.vertex_bits + 1, 0.0);
    for (vertex_t x = 0; x < dist.per_vertex.size(); ++x) {
        out.P[hamming_weight(x ^ target)] += dist.per_vertex[x];
    }
    return out;
}

// Expands shell amplitudes into the full coin (x) vertex space, target at 0.
inline walk_state lift(const collapsed_state& s) {
    const unsigned n = s.n();
    if (n > max_walk_dimension) {
        throw capacity_error("lift: n too large for a full-space state");
    }
    std::vector<amplitude> r_coeff(n + 1);
    std::vector<amplitude> l_coeff(n + 1);
    for (unsigned x = 0; x <= n; ++x) {
        if (x < n) {
            r_coeff[x] = s.right(x) / std::sqrt(detail::right_multiplicity(n, x));
        }
        if (x > 0) {
            l_coeff[x] = s.left(x) / std::sqrt(detail::left_multiplicity(n, x));
        }
    }
    walk_state out(n, n);
    for (unsigned d = 0; d < n; ++d) {
        auto block = out.direction(d);
        for (vertex_t v = 0; v < block.size(); ++v) {
            const unsigned w = hamming_weight(v);
            block[v] = test_bit(v, d) ? l_coeff[w] : r_coeff[w];
        }
    }
    return out;
}

/// Amplitudes before (alpha) and after the coin (beta) for t = 0..t_max.
///
/// alpha[t] is the state after t steps; beta[t] = C' alpha[t] so that
/// alpha[t + 1] = S beta[t]. beta has t_max entries.
struct collapsed_trajectory {
    std::vector<collapsed_state> alpha;
    std::vector<collapsed_state> beta;
};

inline collapsed_trajectory trace_collapsed(unsigned n, unsigned t_max, bool perturbed = true) {
    collapsed_trajectory traj;
    traj.alpha.reserve(t_max + 1);
    traj.beta.reserve(t_max);
    traj.alpha.push_back(collapsed_initial(n));
    for (unsigned t = 0; t < t_max; ++t) {
        traj.beta.push_back(collapsed_coin(traj.alpha.back(), perturbed));
        traj.alpha.push_back(collapsed_shift(traj.beta.back()));
    }
    return traj;
}

}  // namespace qwsearch
