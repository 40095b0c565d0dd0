#include "termlab/report.hpp"

#include <fstream>

#include "termlab/error.hpp"

namespace termlab {

Json Report::to_json() const {
    Json j;
    j["tool_version"] = kToolVersion;
    j["program"] = program.empty() ? Json(nullptr) : Json(program);
    j["method"] = method;
    j["verdict"] = verdict;
    j["certificate"] = certificate;
    j["checked_domain"] = checked_domain;
    j["diagnostics"] = diagnostics;
    j["timing_ms"] = timing_ms;
    return j;
}

Json matrix_json(const TropicalMatrix& m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.n; ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.n; ++j) {
            long long v = m.at(i, j);
            if (v == kInf)
                row.push_back("inf");
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json state_json(const StateVector& s) {
    Json j = Json::array();
    for (long long v : s) j.push_back(v);
    return j;
}

Json trace_json(const Trace& t) {
    Json j;
    Json states = Json::array();
    for (const StateVector& s : t.states) states.push_back(state_json(s));
    j["states"] = std::move(states);
    Json choices = Json::array();
    for (const Choice& c : t.choices) {
        Json step;
        step["case"] = c.first;
        Json inputs = Json::array();
        for (long long v : c.second) inputs.push_back(v);
        step["inputs"] = std::move(inputs);
        choices.push_back(std::move(step));
    }
    j["choices"] = std::move(choices);
    j["terminated"] = t.terminated;
    return j;
}

Json box_domain(const Box& box, long long input_cap) {
    Json j;
    Json dims = Json::array();
    for (auto [lo, hi] : box.dims) dims.push_back(Json::array({lo, hi}));
    j["box"] = std::move(dims);
    j["input_cap"] = input_cap;
    return j;
}

void write_report(const Report& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << r.to_json().dump(2) << '\n';
}

}  // namespace termlab
