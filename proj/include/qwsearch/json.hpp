// json.hpp
// nlohmann::json serialization for reports and protocol outcomes.

#pragma once

#include <nlohmann/json.hpp>

#include "qwsearch/parity.hpp"
#include "qwsearch/protocols.hpp"
#include "qwsearch/report.hpp"

namespace qwsearch {

inline void to_json(nlohmann::ordered_json& j, const check_result& c) {
    j = nlohmann::ordered_json{{"check", c.check}, {"n", c.n}};
    j["t"] = c.t ? nlohmann::ordered_json(*c.t) : nlohmann::ordered_json(nullptr);
    j["x"] = c.x ? nlohmann::ordered_json(*c.x) : nlohmann::ordered_json(nullptr);
    j["value"] = c.value;
    j["relation"] = c.rel == relation::at_most ? "<=" : ">=";
    j["bound"] = c.bound;
    j["passed"] = c.passed();
}

inline void to_json(nlohmann::ordered_json& j, const check_report& r) {
    j = nlohmann::ordered_json{{"suite", r.suite}, {"passed", r.passed()}, {"checks", r.checks}};
}

// Stable field names: found, success, walk_queries, verify_queries, runs_used.
inline void to_json(nlohmann::ordered_json& j, const protocol_outcome& o) {
    j = nlohmann::ordered_json{};
    j["found"] = o.found ? nlohmann::ordered_json(*o.found) : nlohmann::ordered_json(nullptr);
    j["success"] = o.success;
    j["walk_queries"] = o.walk_queries;
    j["verify_queries"] = o.verify_queries;
    j["runs_used"] = o.runs_used;
}

inline void to_json(nlohmann::ordered_json& j, const exact_outcome& o) {
    j = nlohmann::ordered_json{{"success", o.success},
                               {"walk_queries", o.walk_queries},
                               {"expected_verify_queries", o.expected_verify_queries}};
}

inline void to_json(nlohmann::ordered_json& j, const shell_report& r) {
    j = nlohmann::ordered_json{{"n", r.n}, {"t_max", r.t_max}, {"P", r.P}, {"report", r.checks}};
}

inline void to_json(nlohmann::ordered_json& j, const factor_two_report& r) {
    j = nlohmann::ordered_json{{"n", r.n},           {"t_fe", r.t_fe},       {"p0_uniform", r.p0_uniform},
                               {"p0_even", r.p0_even}, {"p0_odd", r.p0_odd}, {"report", r.checks}};
}

}  // namespace qwsearch
