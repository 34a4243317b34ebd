// Generated by tools/frozen_sweep.py. Do not edit by hand.
#pragma once

#include <array>

namespace qwsearch::frozen {

struct sweep_row {
    unsigned n;
    unsigned t_f;
    unsigned t_fe;
    unsigned t_fo;
    double p0;
    double p1;
    double p0_tfe;
    double p0_even_tfe;
    double coin_success;
    double alpha_r0_sq;
    double alpha_l1_sq;
    double alpha_r1_sq;
    unsigned optimal_queries;
    double optimal_success;
    double two_run_success;
};

inline constexpr unsigned sweep_n_min = 5;
inline constexpr unsigned sweep_n_max = 12;

inline constexpr std::array<sweep_row, 8> sweep{{
    {5, 6, 6, 7, 0.41375885120000033, 0.46188328000000045, 0.41375885120000033, 0.8275177024000004, 0.8275177024000007, 0.4137588512000004, 0.41375885120000033, 0.05252948019200009, 4, 0.8235309033468536, 0.8275177024000004},
    {6, 9, 8, 9, 0.41176545167342693, 0.47958560174072234, 0.41176545167342693, 0.8235309033468536, 0.8235309033468539, 0.41176545167342693, 0.41176545167342693, 0.06782015006729536, 6, 0.8044075112105125, 0.8235309033468536},
    {7, 13, 12, 13, 0.4022037556052558, 0.4639332066941918, 0.4022037556052558, 0.8044075112105121, 0.8044075112105116, 0.4022037556052558, 0.4022037556052558, 0.06172945108893602, 9, 0.8689429984947594, 0.8044075112105121},
    {8, 18, 18, 19, 0.43447149924737977, 0.47961962547151415, 0.43447149924737977, 0.8689429984947594, 0.8689429984947594, 0.4344714992473797, 0.43447149924737977, 0.045307966752883275, 12, 0.8483424403476705, 0.8689429984947594},
    {9, 25, 24, 25, 0.4241712201738351, 0.4789475975098255, 0.4241712201738351, 0.8483424403476711, 0.8483424403476703, 0.42417122017383513, 0.4241712201738351, 0.054776377335990396, 18, 0.866861943056743, 0.8483424403476711},
    {10, 36, 36, 37, 0.43343097152837073, 0.47888161683155533, 0.43343097152837073, 0.8668619430567417, 0.8668619430567415, 0.4334309715283708, 0.43343097152837073, 0.04903742920198668, 25, 0.8829133541281656, 0.8668619430567417},
    {11, 50, 50, 51, 0.44145667706408265, 0.4813377577939038, 0.44145667706408265, 0.8829133541281656, 0.8829133541281653, 0.44145667706408265, 0.44145667706408265, 0.04494973284987065, 35, 0.8881687060401617, 0.8829133541281656},
    {12, 71, 70, 71, 0.44408435302008104, 0.48577345331195354, 0.4440843530200809, 0.8881687060401617, 0.888168706040162, 0.444084353020081, 0.4440843530200809, 0.04168910029187267, 50, 0.9027851716085371, 0.8881687060401617},
}};

inline constexpr const sweep_row& at(unsigned n) { return sweep[n - sweep_n_min]; }

// p0 + p1 >= 1 - pc_constant / n over the whole sweep
inline constexpr double pc_constant = 0.94;
// min optimal-protocol success over n = 8..12, floored to 0.01
inline constexpr double optimal_success_threshold = 0.84;
// min even-start target probability over n = 9..12, floored to 0.01
inline constexpr double even_start_threshold = 0.84;
// n = 9 neighbour-protocol success p0 + p1, floored to 0.01
inline constexpr double neighbour_threshold_n9 = 0.9;
// n = 9 coin-measurement success, floored to 0.01
inline constexpr double coin_measure_threshold_n9 = 0.84;

}  // namespace qwsearch::frozen
