// bits.hpp
// Vertex labels, Hamming weights and exact binomials for hypercube walks.

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace qwsearch {

// A hypercube vertex is an n-bit string; bit d is flipped by direction d.
using vertex_t = std::uint64_t;

using uint128 = unsigned __int128;

inline constexpr unsigned max_collapsed_dimension = 64;

constexpr unsigned hamming_weight(vertex_t x) noexcept {
    return static_cast<unsigned>(std::popcount(x));
}

constexpr unsigned parity(vertex_t x) noexcept { return hamming_weight(x) & 1u; }

constexpr vertex_t direction_bit(unsigned d) noexcept { return vertex_t{1} << d; }

constexpr bool test_bit(vertex_t x, unsigned d) noexcept { return ((x >> d) & 1u) != 0; }

// Exact C(n, k) for n <= 64. C(64, 32) < 2^63, so products with n stay in 128 bits.
constexpr uint128 binomial(unsigned n, unsigned k) {
    if (n > max_collapsed_dimension) {
        throw std::out_of_range("binomial: n exceeds 64");
    }
    if (k > n) {
        return 0;
    }
    if (k > n - k) {
        k = n - k;
    }
    uint128 result = 1;
    for (unsigned i = 1; i <= k; ++i) {
        // result * (n - k + i) / i is exact at every step
        result = result * (n - k + i) / i;
    }
    return result;
}

}  // namespace qwsearch
