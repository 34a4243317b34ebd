// qwsearch.hpp
// Umbrella header. json.hpp is separate because it pulls in nlohmann::json.

#pragma once

#include "qwsearch/bits.hpp"
#include "qwsearch/collapsed_walk.hpp"
#include "qwsearch/hypercube_walk.hpp"
#include "qwsearch/optimal_search.hpp"
#include "qwsearch/parity.hpp"
#include "qwsearch/protocols.hpp"
#include "qwsearch/reference_sweep.hpp"
#include "qwsearch/report.hpp"
#include "qwsearch/state.hpp"
