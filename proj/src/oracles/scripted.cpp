#include "cuaplan/oracles/scripted.hpp"

#include "cuaplan/util/text.hpp"

namespace cuaplan::oracles {

using nlohmann::json;

PerceptionAnswer answer_from_json(const json& j) {
    PerceptionAnswer a;
    if (j.contains("start") && !j.at("start").is_null()) {
        const auto& s = j.at("start");
        a.start = env::Coord{s.at(0).get<double>(), s.at(1).get<double>()};
    }
    a.status = j.value("status", "OK");
    a.thought = j.value("thought", "");
    a.text = j.value("text", "");
    a.done = j.value("done", false);
    a.error = j.value("error", "");
    return a;
}

json answer_to_json(const PerceptionAnswer& a) {
    json j = {{"status", a.status}, {"thought", a.thought}, {"text", a.text}, {"done", a.done}};
    j["start"] = a.start ? json::array({a.start->x, a.start->y}) : json(nullptr);
    if (!a.error.empty()) j["error"] = a.error;
    return j;
}

bool ScriptRule::matches(const PerceptionQuery& q) const {
    if (kind && *kind != q.kind) return false;
    if (!frame.empty() && (!q.visual || q.visual->frame_id != frame)) return false;
    if (!text_contains.empty() && !text::contains_ci(q.text + "\n" + q.hypothesis, text_contains)) return false;
    return true;
}

OracleScript OracleScript::from_json(const json& j) {
    OracleScript s;
    for (const auto& r : j.value("rules", json::array())) {
        ScriptRule rule;
        if (r.contains("kind")) rule.kind = query_kind_from_string(r.at("kind").get<std::string>());
        rule.text_contains = r.value("text_contains", "");
        rule.frame = r.value("frame", "");
        rule.response = answer_from_json(r.value("response", json::object()));
        rule.target = r.value("target", "");
        s.rules.push_back(std::move(rule));
    }
    if (j.contains("fallback")) s.fallback = answer_from_json(j.at("fallback"));
    return s;
}

json OracleScript::to_json() const {
    json rules_json = json::array();
    for (const auto& r : rules) {
        json rj = {{"text_contains", r.text_contains}, {"frame", r.frame}, {"response", answer_to_json(r.response)}};
        if (r.kind) rj["kind"] = to_string(*r.kind);
        if (!r.target.empty()) rj["target"] = r.target;
        rules_json.push_back(rj);
    }
    json j = {{"rules", rules_json}};
    if (fallback) j["fallback"] = answer_to_json(*fallback);
    return j;
}

ScriptedPerception::ScriptedPerception(OracleScript script, PerceptionPtr inner)
    : script_(std::move(script)), inner_(std::move(inner)) {}

PerceptionAnswer ScriptedPerception::answer(const PerceptionQuery& q) const {
    for (const auto& r : script_.rules) {
        if (!r.matches(q)) continue;
        PerceptionAnswer a = r.response;
        if (!r.target.empty() && q.visual) {
            if (const auto* item = q.visual->item(r.target)) a.start = item->bounds.center();
        }
        return a;
    }
    if (script_.fallback) return *script_.fallback;
    if (inner_) return inner_->answer(q);
    PerceptionAnswer a;
    a.status = "UNKNOWN";
    return a;
}

}  // namespace cuaplan::oracles
