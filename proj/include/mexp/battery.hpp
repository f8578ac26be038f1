#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mexp/entropy.hpp"
#include "mexp/verdict.hpp"

namespace mexp {

struct TheoremCase {
    std::string id;
    std::string anchor;       // which statement the case restates
    std::string claim;        // the statement, informally
    std::string restatement;  // what is executed and what must hold
    std::string budgets;
    std::vector<std::string> systems;
    std::vector<std::string> measures;
};

/// Every case, in report order.
const std::vector<TheoremCase>& battery_cases();

/// Throws UsageError for an unknown id.
const TheoremCase& find_case(const std::string& id);

struct CaseOutcome {
    TheoremCase info;
    CheckOutcome outcome = CheckOutcome::inconclusive;
    std::vector<std::pair<std::string, std::string>> evidence;
    std::string error;  // set when the case threw
};

struct ConsistencyRow {
    std::string system;
    Verdict decay = Verdict::inconclusive;
    Verdict diagonal = Verdict::inconclusive;
    Verdict generator = Verdict::inconclusive;
    bool agree = false;
};

/// One-sided decay, product-diagonal and generator verdicts side by side.
std::vector<ConsistencyRow> consistency_matrix(std::uint64_t seed, int workers = 1);

struct BatteryReport {
    std::uint64_t seed = 0;
    /// Configuration echo embedded in both report formats.
    std::string config;
    std::vector<CaseOutcome> cases;
    std::vector<ConsistencyRow> consistency;

    /// Every case passed or was vacuous.
    bool ok() const;
    std::vector<std::string> failing() const;
};

/// Runs the cases whose ids are in `filter` (all when empty). Case errors are
/// recorded as inconclusive. The report depends only on `filter` and `seed`.
BatteryReport run_battery(const std::vector<std::string>& filter, std::uint64_t seed, int workers = 1);

std::string battery_json(const BatteryReport& report);
std::string battery_markdown(const BatteryReport& report);

/// Anchor, claim, executable restatement and budgets of a case.
std::string explain(const std::string& id);

}  // namespace mexp
