#!/usr/bin/env python3
"""Exact reference sweep over hypercube dimensions n = 5..12.

Written against numpy only and kept independent of the C++ headers. The
output is the checked-in table include/qwsearch/reference_sweep.hpp; every acceptance
threshold used by the test suites is derived here and nowhere else.

Usage: python3 tools/frozen_sweep.py > include/qwsearch/reference_sweep.hpp
"""

import math
import sys

import numpy as np

N_MIN, N_MAX = 5, 12


def nearest_int(x):
    return int(math.floor(x + 0.5))


def skw_steps(n):
    return nearest_int(math.pi / 2 * math.sqrt(2 ** (n - 1)))


def hamming_weights(size):
    return np.array([bin(x).count("1") for x in range(size)])


def grover_walk(coin_dim, vbits, schedule, marked, start):
    """Coined walk with coin_dim directions on a 2**vbits vertex space.

    Directions d < vbits flip bit d, the rest are self loops. `schedule` is a
    sequence of booleans, True meaning the oracle-perturbed coin.
    """
    size = 2 ** vbits
    labels = np.arange(size)
    psi = start.copy()
    marked = list(marked)
    for perturbed in schedule:
        before = psi[:, marked].copy()
        psi = (2.0 / coin_dim) * psi.sum(axis=0) - psi
        if perturbed:
            psi[:, marked] = -before
        for d in range(min(coin_dim, vbits)):
            psi[d] = psi[d][labels ^ (1 << d)]
    return psi


def uniform(coin_dim, vbits):
    size = 2 ** vbits
    return np.full((coin_dim, size), 1.0 / math.sqrt(coin_dim * size), dtype=complex)


def parity_start(n, even):
    w = hamming_weights(2 ** n)
    mask = np.where(w % 2 == (0 if even else 1), math.sqrt(2.0), 0.0)
    return uniform(n, n) * mask


def probs(psi):
    return (np.abs(psi) ** 2).sum(axis=0)


def row(n):
    size = 2 ** n
    w = hamming_weights(size)
    t_f = skw_steps(n)
    t_fe = 2 * (t_f // 2)
    t_fo = t_fe + 1

    final = grover_walk(n, n, [True] * t_f, [0], uniform(n, n))
    pv = probs(final)
    p0, p1 = pv[0], pv[w == 1].sum()

    even = grover_walk(n, n, [True] * t_fe, [0], uniform(n, n))
    even_start = grover_walk(n, n, [True] * t_fe, [0], parity_start(n, True))
    odd_start = grover_walk(n, n, [True] * t_fe, [0], parity_start(n, False))

    odd = grover_walk(n, n, [True] * t_fo, [0], uniform(n, n))
    r0 = (np.abs(odd[:, 0]) ** 2).sum()
    l1 = sum(abs(odd[d, 1 << d]) ** 2 for d in range(n))
    r1 = sum(abs(odd[d, x]) ** 2 for x in range(size) if w[x] == 1
             for d in range(n) if not (x >> d) & 1)

    r = skw_steps(n + 1) // 2
    loop = grover_walk(n + 1, n, [True, False] * r, [0], uniform(n + 1, n))
    optimal = probs(loop)[0]

    q_even = probs(even_start)[0]
    q_odd = probs(odd_start)[0]
    two_run = 1.0 - (1.0 - q_even) * (1.0 - q_odd)

    return dict(n=n, t_f=t_f, t_fe=t_fe, t_fo=t_fo, p0=p0, p1=p1,
                p0_tfe=probs(even)[0], p0_even_tfe=q_even,
                coin_success=r0 + l1, alpha_r0_sq=r0, alpha_l1_sq=l1,
                alpha_r1_sq=r1, optimal_queries=r, optimal_success=optimal,
                two_run_success=two_run)


def floor2(x):
    return math.floor(x * 100) / 100


def ceil2(x):
    return math.ceil(x * 100) / 100


def main():
    rows = [row(n) for n in range(N_MIN, N_MAX + 1)]
    by_n = {r["n"]: r for r in rows}

    pc_constant = ceil2(max(r["n"] * (1 - r["p0"] - r["p1"]) for r in rows))
    optimal_threshold = floor2(min(by_n[n]["optimal_success"] for n in range(8, 13)))
    even_threshold = floor2(min(by_n[n]["p0_even_tfe"] for n in range(9, 13)))
    neighbour_threshold = floor2(by_n[9]["p0"] + by_n[9]["p1"])
    coin_threshold = floor2(by_n[9]["coin_success"])
    for value in (optimal_threshold, even_threshold, neighbour_threshold, coin_threshold):
        assert value >= 0.8, value

    out = sys.stdout
    out.write("// Generated by tools/frozen_sweep.py. Do not edit by hand.\n")
    out.write("#pragma once\n\n#include <array>\n\nnamespace qwsearch::frozen {\n\n")
    out.write("struct sweep_row {\n")
    out.write("    unsigned n;\n    unsigned t_f;\n    unsigned t_fe;\n    unsigned t_fo;\n")
    for key in ("p0", "p1", "p0_tfe", "p0_even_tfe", "coin_success", "alpha_r0_sq",
                "alpha_l1_sq", "alpha_r1_sq"):
        out.write(f"    double {key};\n")
    out.write("    unsigned optimal_queries;\n    double optimal_success;\n")
    out.write("    double two_run_success;\n};\n\n")
    out.write(f"inline constexpr unsigned sweep_n_min = {N_MIN};\n")
    out.write(f"inline constexpr unsigned sweep_n_max = {N_MAX};\n\n")
    out.write(f"inline constexpr std::array<sweep_row, {len(rows)}> sweep{{{{\n")
    for r in rows:
        fields = [str(r["n"]), str(r["t_f"]), str(r["t_fe"]), str(r["t_fo"])]
        fields += [repr(float(r[k])) for k in ("p0", "p1", "p0_tfe", "p0_even_tfe",
                                               "coin_success", "alpha_r0_sq",
                                               "alpha_l1_sq", "alpha_r1_sq")]
        fields += [str(r["optimal_queries"]), repr(float(r["optimal_success"])),
                   repr(float(r["two_run_success"]))]
        out.write("    {" + ", ".join(fields) + "},\n")
    out.write("}};\n\n")
    out.write("inline constexpr const sweep_row& at(unsigned n) { return sweep[n - sweep_n_min]; }\n\n")
    out.write("// p0 + p1 >= 1 - pc_constant / n over the whole sweep\n")
    out.write(f"inline constexpr double pc_constant = {pc_constant!r};\n")
    out.write("// min optimal-protocol success over n = 8..12, floored to 0.01\n")
    out.write(f"inline constexpr double optimal_success_threshold = {optimal_threshold!r};\n")
    out.write("// min even-start target probability over n = 9..12, floored to 0.01\n")
    out.write(f"inline constexpr double even_start_threshold = {even_threshold!r};\n")
    out.write("// n = 9 neighbour-protocol success p0 + p1, floored to 0.01\n")
    out.write(f"inline constexpr double neighbour_threshold_n9 = {neighbour_threshold!r};\n")
    out.write("// n = 9 coin-measurement success, floored to 0.01\n")
    out.write(f"inline constexpr double coin_measure_threshold_n9 = {coin_threshold!r};\n\n")
    out.write("}  // namespace qwsearch::frozen\n")


if __name__ == "__main__":
    main()
