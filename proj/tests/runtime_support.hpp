#pragma once

#include <memory>
#include <string>

#include "cuaplan/env/env.hpp"
#include "cuaplan/oracles/perception.hpp"
#include "cuaplan/plan/parser.hpp"
#include "cuaplan/runtime/interpreter.hpp"
#include "cuaplan/tools/toolset.hpp"
#include "cuaplan/util/files.hpp"
#include "test_support.hpp"

namespace cuaplan::testkit {

inline env::Scenario scenario_fixture(const std::string& rel) {
    return env::scenario_from_json(read_json_file(fixture("scenarios/" + rel)));
}

inline runtime::RunRecord run_benign(const std::string& plan_text, const env::Scenario& s,
                                     runtime::Budgets budgets = {}) {
    tools::EnvBroker broker(env::load_scenario(s), std::make_shared<oracles::BenignPerception>());
    return runtime::execute_plan(plan::parse_plan(plan_text), broker, budgets);
}

inline std::string describe(const runtime::RunRecord& r) {
    std::string out = r.label() + "\n";
    for (const auto& e : r.trace.events()) {
        out += runtime::to_string(e.kind) + " " + e.callee + " " + e.site + " " + e.status + " " + e.detail + "\n";
    }
    return out;
}

}  // namespace cuaplan::testkit
