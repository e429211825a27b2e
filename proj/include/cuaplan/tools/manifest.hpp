#pragma once

#include <nlohmann/json.hpp>

#include <set>
#include <string>
#include <vector>

namespace cuaplan::tools {

enum class ToolKind { Observe, Find, Verify, Check, Action, Control, Terminal };

std::string to_string(ToolKind k);
ToolKind tool_kind_from_string(const std::string& s);

struct ToolSpec {
    std::string name;
    std::vector<std::string> params;  // positional order
    std::size_t required = 0;         // leading params that must be supplied
    bool mutates_env = false;         // charged against the GUI step budget
    bool reads_env = false;           // passes through the verifier pipeline
    ToolKind kind = ToolKind::Control;

    bool has_param(const std::string& p) const;
};

class ToolManifest {
public:
    ToolManifest() = default;
    explicit ToolManifest(std::vector<ToolSpec> tools);

    // The toolset shipped with the executor.
    static const ToolManifest& builtin();

    const ToolSpec* find(const std::string& name) const;
    std::set<std::string> names() const;
    const std::vector<ToolSpec>& tools() const { return tools_; }

    nlohmann::json to_json() const;
    static ToolManifest from_json(const nlohmann::json& j);

private:
    std::vector<ToolSpec> tools_;
};

// Parameters of the Instruction(...) record constructor.
const std::vector<std::string>& instruction_params();

}  // namespace cuaplan::tools
