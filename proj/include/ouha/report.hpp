#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace ouha {

using Json = nlohmann::ordered_json;

// One checked (or merely reported) comparison computed <= bound.
struct Case {
    std::string label;
    Json inputs = Json::object();
    double computed = 0;
    double bound = 0;
    double slack = 0;
    bool asserted = true;
    bool pass = true;
    double ratio = 0;
};

// Builds a case with pass = computed <= bound + slack and ratio = computed / bound
// (computed itself when bound == 0).
Case make_case(std::string label, Json inputs, double computed, double bound, double slack,
               bool asserted = true);

struct SuiteReport {
    std::string suite;
    Json config = Json::object();
    std::vector<Case> cases;
    std::vector<std::pair<std::string, double>> fitted_constants;
    Json notes = Json::object();

    void add(Case c) { cases.push_back(std::move(c)); }
    void fit(std::string name, double value) { fitted_constants.emplace_back(std::move(name), value); }

    int pass_count() const;
    int fail_count() const;    // asserted cases that failed
    double worst_ratio() const;  // over asserted cases
    bool passed() const { return fail_count() == 0; }

    Json to_json() const;
};

std::string to_json_text(const std::vector<SuiteReport>& reports, bool as_array);
// One row per case: suite,label,computed,bound,slack,asserted,pass,ratio,inputs
std::string to_csv(const std::vector<SuiteReport>& reports);

}  // namespace ouha
