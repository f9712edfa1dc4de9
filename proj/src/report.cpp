#include "ouha/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ouha {
namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Case make_case(std::string label, Json inputs, double computed, double bound, double slack,
               bool asserted) {
    Case c;
    c.label = std::move(label);
    c.inputs = std::move(inputs);
    c.computed = computed;
    c.bound = bound;
    c.slack = slack;
    c.asserted = asserted;
    c.pass = computed <= bound + slack;
    c.ratio = bound != 0 ? computed / bound : computed;
    return c;
}

int SuiteReport::pass_count() const {
    return int(std::count_if(cases.begin(), cases.end(), [](const Case& c) { return c.pass; }));
}

int SuiteReport::fail_count() const {
    return int(std::count_if(cases.begin(), cases.end(),
                             [](const Case& c) { return c.asserted && !c.pass; }));
}

double SuiteReport::worst_ratio() const {
    double w = 0;
    bool any = false;
    for (const auto& c : cases) {
        if (!c.asserted || !std::isfinite(c.ratio)) continue;
        w = any ? std::max(w, c.ratio) : c.ratio;
        any = true;
    }
    return w;
}

Json SuiteReport::to_json() const {
    Json j;
    j["schema_version"] = "1";
    j["suite"] = suite;
    j["config"] = config;
    Json arr = Json::array();
    for (const auto& c : cases) {
        Json e;
        e["label"] = c.label;
        e["inputs"] = c.inputs;
        e["computed"] = number(c.computed);
        e["bound"] = number(c.bound);
        e["slack"] = number(c.slack);
        e["asserted"] = c.asserted;
        e["pass"] = c.pass;
        e["ratio"] = number(c.ratio);
        arr.push_back(std::move(e));
    }
    j["cases"] = std::move(arr);
    Json fitted = Json::object();
    for (const auto& [name, v] : fitted_constants) fitted[name] = number(v);
    j["summary"] = {{"pass", pass_count()},
                    {"fail", fail_count()},
                    {"worst_ratio", number(worst_ratio())},
                    {"fitted_constants", fitted}};
    if (!notes.empty()) j["notes"] = notes;
    return j;
}

std::string to_json_text(const std::vector<SuiteReport>& reports, bool as_array) {
    if (!as_array && reports.size() == 1) return reports.front().to_json().dump(2) + "\n";
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    return arr.dump(2) + "\n";
}

std::string to_csv(const std::vector<SuiteReport>& reports) {
    std::ostringstream os;
    os << "suite,label,computed,bound,slack,asserted,pass,ratio,inputs\n";
    for (const auto& r : reports) {
        for (const auto& c : r.cases) {
            os << csv_field(r.suite) << ',' << csv_field(c.label) << ',' << csv_number(c.computed) << ','
               << csv_number(c.bound) << ',' << csv_number(c.slack) << ',' << (c.asserted ? 1 : 0)
               << ',' << (c.pass ? 1 : 0) << ',' << csv_number(c.ratio) << ','
               << csv_field(c.inputs.dump()) << '\n';
        }
    }
    return os.str();
}

}  // namespace ouha
