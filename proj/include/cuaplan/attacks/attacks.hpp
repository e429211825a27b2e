#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuaplan/env/scenario.hpp"
#include "cuaplan/oracles/compromised.hpp"

namespace cuaplan::attacks {

enum class AttackKind { CookieStatic, CookieHtml5, CookieHop, CookieLongRange, Pixel };

std::string to_string(AttackKind k);  // COOKIE_STATIC ...
// Also accepts static, html5, hop, long_range, pixel.
AttackKind attack_kind_from_string(const std::string& s);

struct AttackConfig {
    AttackKind kind = AttackKind::CookieStatic;
    std::vector<std::string> target_frames;
    std::string spoofed_frame = "spoofed";
    std::string hop_frame = "hop";
    // Pixel only: the viewer id the patch is optimized against, the element
    // carrying it, the element the forged answer points at, and the query
    // substrings it responds to.
    std::string oracle_target;
    std::string perturb_element;
    std::string attacker_element;
    std::vector<std::string> match_any;
    // Forged rationale; "{label}" and "{instruction}" are substituted.
    std::string thought;

    static AttackConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

class AttackError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NoAdSlot : public AttackError {
public:
    explicit NoAdSlot(const std::string& frame) : AttackError("frame '" + frame + "' has no ad slot") {}
};
class HopPrereqUnmet : public AttackError {
public:
    explicit HopPrereqUnmet(const std::string& why) : AttackError("hop attack needs a multi-page task: " + why) {}
};
class UnknownFrame : public AttackError {
public:
    explicit UnknownFrame(const std::string& frame) : AttackError("unknown frame '" + frame + "'") {}
};

// A mutated scenario plus the triggers a compromised perception model honors on it.
struct AttackedScenario {
    env::Scenario scenario;
    std::vector<oracles::Trigger> triggers;
    AttackConfig config;
    std::string id;  // fixture id; the scenario keeps the benign task id
};

AttackedScenario apply_cookie_attack(const env::Scenario& spec, const AttackConfig& cfg);
AttackedScenario apply_pixel_attack(const env::Scenario& spec, const AttackConfig& cfg);
AttackedScenario apply_attack(const env::Scenario& spec, const AttackConfig& cfg);

// Default cookie-attack targets for a benign scenario: the initial frame
// for STATIC/HTML5/HOP, the first later frame with an ad for LONG_RANGE.
AttackConfig default_cookie_config(const env::Scenario& spec, AttackKind kind);

// {"base": "<path relative to this file>", "attack": {...}}
AttackedScenario load_attack_fixture(const std::filesystem::path& path);
bool is_attack_fixture(const nlohmann::json& j);

}  // namespace cuaplan::attacks
