#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ccch {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string measured;  // human-readable summary of the measured quantities
    std::string bound;
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> values;  // machine-readable measurements
};

struct AcceptanceOptions {
    int threads = 4;
    std::uint64_t seed = 20240601;
    std::vector<int> only;  // empty: all criteria
};

// Runs the cross-module acceptance suite. Criterion 8 aggregates the phase-functional
// drift of every simulator run made by the criteria selected before it.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

// One line: "[PASS] 3 T-function suite: measured ... | bound ... (1.2 s)".
std::string format_result(const CriterionResult& r);

}  // namespace ccch
