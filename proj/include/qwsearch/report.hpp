// report.hpp
// Pass/fail records produced by the invariant suites.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qwsearch {

enum class relation { at_most, at_least };

/// One numerical check: `value` compared against `bound`.
///
/// Residual checks use at_most with the tolerance as bound; threshold checks
/// use at_least. `t` and `x` locate the worst case when the check was
/// evaluated over a range of steps or shells.
struct check_result {
    std::string check;
    unsigned n = 0;
    std::optional<unsigned> t;
    std::optional<unsigned> x;
    double value = 0.0;
    relation rel = relation::at_most;
    double bound = 0.0;

    bool passed() const noexcept { return rel == relation::at_most ? value <= bound : value >= bound; }
};

struct check_report {
    std::string suite;
    std::vector<check_result> checks;

    bool passed() const noexcept {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
    }

    void append(const check_report& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }

    const check_result* find(std::string_view name) const noexcept {
        for (const auto& c : checks) {
            if (c.check == name) {
                return &c;
            }
        }
        return nullptr;
    }

    // Largest value recorded under `name` (all n), or nullopt if never recorded.
    std::optional<double> max_value(std::string_view name) const noexcept {
        std::optional<double> worst;
        for (const auto& c : checks) {
            if (c.check == name && (!worst || c.value > *worst)) {
                worst = c.value;
            }
        }
        return worst;
    }
};

namespace detail {

// Keeps the worst (largest) residual of one named check across a sweep.
class worst_case {
public:
    worst_case(std::string name, unsigned n, double tolerance)
        : result_{std::move(name), n, std::nullopt, std::nullopt, 0.0, relation::at_most, tolerance} {}

    void observe(double residual, std::optional<unsigned> t = std::nullopt,
                 std::optional<unsigned> x = std::nullopt) {
        if (!seen_ || residual > result_.value) {
            result_.value = residual;
            result_.t = t;
            result_.x = x;
            seen_ = true;
        }
    }

    bool seen() const noexcept { return seen_; }
    const check_result& result() const noexcept { return result_; }

private:
    check_result result_;
    bool seen_ = false;
};

}  // namespace detail

}  // namespace qwsearch
