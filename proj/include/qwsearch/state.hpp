// state.hpp
// State vectors over the coin (x) vertex product space, measurement
// distributions and seeded sampling.
//
// Layout is coin-major: the amplitude of |d, x> lives at d * 2^vertex_bits + x,
// so every coin direction owns one contiguous block indexed by vertex label
// and a hypercube shift is an XOR permutation inside that block.

#pragma once

#include <algorithm>
#include <complex>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwsearch/bits.hpp"

namespace qwsearch {

using amplitude = std::complex<double>;

class capacity_error : public std::length_error {
public:
    using std::length_error::length_error;
};

class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// 2^32 amplitudes (64 GiB) is the largest state we agree to allocate.
inline constexpr std::size_t max_state_size = std::size_t{1} << 32;

inline constexpr double normalization_tolerance = 1e-6;

class walk_state {
public:
    walk_state(unsigned coin_dim, unsigned vertex_bits)
        : coin_dim_(coin_dim), vertex_bits_(vertex_bits) {
        if (coin_dim == 0 || vertex_bits == 0) {
            throw std::invalid_argument("walk_state: coin and vertex dimensions must be positive");
        }
        if (vertex_bits >= 32) {
            throw capacity_error("walk_state: vertex space 2^" + std::to_string(vertex_bits) +
                                 " is too large");
        }
        const std::size_t vertices = std::size_t{1} << vertex_bits;
        if (coin_dim > max_state_size / vertices) {
            throw capacity_error("walk_state: " + std::to_string(coin_dim) + " x 2^" +
                                 std::to_string(vertex_bits) + " amplitudes exceed capacity");
        }
        amplitudes_.assign(vertices * coin_dim, amplitude{});
    }

    unsigned coin_dim() const noexcept { return coin_dim_; }
    unsigned vertex_bits() const noexcept { return vertex_bits_; }
    std::size_t vertex_count() const noexcept { return std::size_t{1} << vertex_bits_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }

    std::size_t index(unsigned d, vertex_t x) const noexcept {
        return static_cast<std::size_t>(d) * vertex_count() + static_cast<std::size_t>(x);
    }

    amplitude& operator()(unsigned d, vertex_t x) noexcept { return amplitudes_[index(d, x)]; }
    const amplitude& operator()(unsigned d, vertex_t x) const noexcept {
        return amplitudes_[index(d, x)];
    }

    amplitude& at(unsigned d, vertex_t x) {
        check(d, x);
        return amplitudes_[index(d, x)];
    }
    const amplitude& at(unsigned d, vertex_t x) const {
        check(d, x);
        return amplitudes_[index(d, x)];
    }

    std::span<amplitude> amplitudes() noexcept { return amplitudes_; }
    std::span<const amplitude> amplitudes() const noexcept { return amplitudes_; }

    // Contiguous block of all vertex amplitudes for coin direction d.
    std::span<amplitude> direction(unsigned d) noexcept {
        return std::span<amplitude>(amplitudes_).subspan(index(d, 0), vertex_count());
    }
    std::span<const amplitude> direction(unsigned d) const noexcept {
        return std::span<const amplitude>(amplitudes_).subspan(index(d, 0), vertex_count());
    }

    bool same_shape(const walk_state& other) const noexcept {
        return coin_dim_ == other.coin_dim_ && vertex_bits_ == other.vertex_bits_;
    }

    friend bool operator==(const walk_state&, const walk_state&) = default;

private:
    void check(unsigned d, vertex_t x) const {
        if (d >= coin_dim_ || x >= vertex_count()) {
            throw std::out_of_range("walk_state: basis index out of range");
        }
    }

    unsigned coin_dim_;
    unsigned vertex_bits_;
    std::vector<amplitude> amplitudes_;
};

inline walk_state make_state(unsigned coin_dim, unsigned vertex_bits) {
    return walk_state(coin_dim, vertex_bits);
}

inline walk_state basis_state(unsigned coin_dim, unsigned vertex_bits, unsigned d, vertex_t x) {
    walk_state s(coin_dim, vertex_bits);
    s.at(d, x) = 1.0;
    return s;
}

inline void require_same_shape(const walk_state& a, const walk_state& b, const char* what) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

inline double norm_squared(const walk_state& s) noexcept {
    double total = 0.0;
    for (const auto& a : s.amplitudes()) {
        total += std::norm(a);
    }
    return total;
}

// <a|b>, conjugate-linear in a.
inline amplitude inner(const walk_state& a, const walk_state& b) {
    require_same_shape(a, b, "inner");
    amplitude total{};
    auto lhs = a.amplitudes();
    auto rhs = b.amplitudes();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        total += std::conj(lhs[i]) * rhs[i];
    }
    return total;
}

// Euclidean norm of a - b.
inline double distance(const walk_state& a, const walk_state& b) {
    require_same_shape(a, b, "distance");
    double total = 0.0;
    auto lhs = a.amplitudes();
    auto rhs = b.amplitudes();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        total += std::norm(lhs[i] - rhs[i]);
    }
    return std::sqrt(total);
}

inline double max_abs_difference(const walk_state& a, const walk_state& b) {
    require_same_shape(a, b, "max_abs_difference");
    double worst = 0.0;
    auto lhs = a.amplitudes();
    auto rhs = b.amplitudes();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    }
    return worst;
}

inline walk_state operator+(walk_state a, const walk_state& b) {
    require_same_shape(a, b, "operator+");
    auto lhs = a.amplitudes();
    auto rhs = b.amplitudes();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        lhs[i] += rhs[i];
    }
    return a;
}

inline walk_state operator*(amplitude factor, walk_state s) {
    for (auto& a : s.amplitudes()) {
        a *= factor;
    }
    return s;
}

/// Measurement statistics of a walk state.
///
/// `per_vertex[x]` is the probability of finding the walker at x with the coin
/// ignored. `per_coin_vertex` is empty unless requested; when present it uses
/// the walk_state index layout and describes a joint coin and vertex
/// measurement.
struct distribution {
    unsigned coin_dim = 0;
    unsigned vertex_bits = 0;
    std::vector<double> per_vertex;
    std::vector<double> per_coin_vertex;

    bool has_coin() const noexcept { return !per_coin_vertex.empty(); }
};

inline distribution vertex_distribution(const walk_state& s, bool with_coin = false) {
    const double total = norm_squared(s);
    if (std::abs(total - 1.0) > normalization_tolerance) {
        throw validation_error("vertex_distribution: state is not normalized (norm^2 = " +
                               std::to_string(total) + ")");
    }
    distribution dist;
    dist.coin_dim = s.coin_dim();
    dist.vertex_bits = s.vertex_bits();
    dist.per_vertex.assign(s.vertex_count(), 0.0);
    for (unsigned d = 0; d < s.coin_dim(); ++d) {
        auto block = s.direction(d);
        for (std::size_t x = 0; x < block.size(); ++x) {
            dist.per_vertex[x] += std::norm(block[x]);
        }
    }
    if (with_coin) {
        dist.per_coin_vertex.reserve(s.size());
        for (const auto& a : s.amplitudes()) {
            dist.per_coin_vertex.push_back(std::norm(a));
        }
    }
    return dist;
}

inline void validate(const distribution& dist) {
    auto check = [](std::span<const double> p, const char* what) {
        double total = 0.0;
        for (double v : p) {
            if (!(v >= 0.0)) {
                throw validation_error(std::string("distribution: negative or NaN entry in ") + what);
            }
            total += v;
        }
        if (std::abs(total - 1.0) > normalization_tolerance) {
            throw validation_error(std::string("distribution: ") + what + " does not sum to 1");
        }
    };
    if (dist.per_vertex.empty()) {
        throw validation_error("distribution: empty");
    }
    check(dist.per_vertex, "per_vertex");
    if (dist.has_coin()) {
        if (dist.per_coin_vertex.size() != dist.per_vertex.size() * dist.coin_dim) {
            throw validation_error("distribution: per_coin_vertex has the wrong length");
        }
        check(dist.per_coin_vertex, "per_coin_vertex");
    }
}

/// Deterministic random source used throughout the repository.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform variates take the top 53 bits of one draw, so results do
/// not depend on the standard library's distribution implementations.
class rng {
public:
    explicit rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; seed for stream `index` derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Normalized state with i.i.d. complex Gaussian amplitudes (Box-Muller on rng::uniform).
inline walk_state random_state(unsigned coin_dim, unsigned vertex_bits, rng& gen) {
    walk_state s(coin_dim, vertex_bits);
    for (auto& a : s.amplitudes()) {
        const double u1 = 1.0 - gen.uniform();
        const double u2 = gen.uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        a = std::polar(radius, 2.0 * std::numbers::pi * u2);
    }
    const double scale = 1.0 / std::sqrt(norm_squared(s));
    for (auto& a : s.amplitudes()) {
        a *= scale;
    }
    return s;
}

struct measurement {
    std::optional<unsigned> coin;
    vertex_t vertex = 0;

    friend bool operator==(const measurement&, const measurement&) = default;
};

namespace detail {

// Inverse-CDF draw. The last index with positive weight absorbs rounding at the top.
inline std::size_t draw_index(std::span<const double> weights, rng& gen) {
    const double u = gen.uniform();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) {
            continue;
        }
        cumulative += weights[i];
        last_positive = i;
        if (u < cumulative) {
            return i;
        }
    }
    return last_positive;
}

}  // namespace detail

// Joint (coin, vertex) sample if the distribution carries coin data, vertex only otherwise.
inline measurement sample(const distribution& dist, rng& gen) {
    validate(dist);
    if (dist.has_coin()) {
        const std::size_t i = detail::draw_index(dist.per_coin_vertex, gen);
        const std::size_t vertices = dist.per_vertex.size();
        return {static_cast<unsigned>(i / vertices), static_cast<vertex_t>(i % vertices)};
    }
    return {std::nullopt, static_cast<vertex_t>(detail::draw_index(dist.per_vertex, gen))};
}

}  // namespace qwsearch
