#include "cuaplan/tools/manifest.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuaplan::tools {

std::string to_string(ToolKind k) {
    switch (k) {
        case ToolKind::Observe: return "observe";
        case ToolKind::Find: return "find";
        case ToolKind::Verify: return "verify";
        case ToolKind::Check: return "check";
        case ToolKind::Action: return "action";
        case ToolKind::Control: return "control";
        case ToolKind::Terminal: return "terminal";
    }
    return "control";
}

ToolKind tool_kind_from_string(const std::string& s) {
    for (ToolKind k : {ToolKind::Observe, ToolKind::Find, ToolKind::Verify, ToolKind::Check,
                       ToolKind::Action, ToolKind::Control, ToolKind::Terminal}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown tool kind: " + s);
}

bool ToolSpec::has_param(const std::string& p) const {
    return std::find(params.begin(), params.end(), p) != params.end();
}

ToolManifest::ToolManifest(std::vector<ToolSpec> tools) : tools_(std::move(tools)) {}

const ToolManifest& ToolManifest::builtin() {
    using K = ToolKind;
    static const ToolManifest m({
        {"summarize_screenshot_content", {"instruction", "length"}, 1, false, true, K::Observe},
        {"find", {"instruction"}, 1, false, true, K::Find},
        {"find_element_by_text", {"description", "element_types"}, 1, false, true, K::Find},
        {"verify_hypothesis", {"observation", "hypothesis"}, 2, false, true, K::Verify},
        {"get_page_elements", {"element_types"}, 0, false, true, K::Observe},
        {"get_page_text", {"max_length", "include_navigation"}, 0, false, true, K::Observe},
        {"check_done", {"instruction"}, 1, false, false, K::Check},
        {"left_single", {"start", "instruction"}, 1, true, false, K::Action},
        {"type_text", {"text", "instruction"}, 1, true, false, K::Action},
        {"press", {"key", "instruction"}, 1, true, false, K::Action},
        {"hotkey", {"keys", "instruction"}, 1, true, false, K::Action},
        {"scroll", {"direction", "start", "instruction"}, 1, true, false, K::Action},
        {"wait", {"seconds"}, 0, false, false, K::Control},
        {"no_op", {}, 0, false, false, K::Control},
        {"mark_done", {}, 0, false, false, K::Terminal},
        {"mark_fail", {}, 0, false, false, K::Terminal},
    });
    return m;
}

const ToolSpec* ToolManifest::find(const std::string& name) const {
    for (const auto& t : tools_) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

std::set<std::string> ToolManifest::names() const {
    std::set<std::string> out;
    for (const auto& t : tools_) out.insert(t.name);
    return out;
}

nlohmann::json ToolManifest::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : tools_) {
        arr.push_back({{"name", t.name},
                       {"params", t.params},
                       {"required", t.required},
                       {"arity", t.params.size()},
                       {"mutates_env", t.mutates_env},
                       {"reads_env", t.reads_env},
                       {"kind", to_string(t.kind)}});
    }
    return {{"tools", arr}};
}

ToolManifest ToolManifest::from_json(const nlohmann::json& j) {
    std::vector<ToolSpec> tools;
    for (const auto& t : j.at("tools")) {
        ToolSpec s;
        s.name = t.at("name").get<std::string>();
        s.params = t.at("params").get<std::vector<std::string>>();
        s.required = t.value("required", std::size_t{0});
        s.mutates_env = t.value("mutates_env", false);
        s.reads_env = t.value("reads_env", false);
        s.kind = tool_kind_from_string(t.value("kind", std::string("control")));
        if (s.required > s.params.size()) {
            throw std::invalid_argument("tool '" + s.name + "' requires more params than it declares");
        }
        tools.push_back(std::move(s));
    }
    return ToolManifest(std::move(tools));
}

const std::vector<std::string>& instruction_params() {
    static const std::vector<std::string> p = {"text", "length"};
    return p;
}

}  // namespace cuaplan::tools
