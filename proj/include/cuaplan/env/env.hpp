#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuaplan/env/scenario.hpp"

namespace cuaplan::env {

class OutOfBounds : public std::runtime_error {
public:
    explicit OutOfBounds(Coord c);
    Coord coord;
};

// Raised by page readers on frames without an accessibility tree.
class NoPage : public std::runtime_error {
public:
    explicit NoPage(const std::string& frame_id);
};

enum class Terminal { None, Done, Fail };

// Mutable world state of one run. Copying is cheap: the scenario itself
// is shared and immutable.
class EnvState {
public:
    explicit EnvState(std::shared_ptr<const Scenario> scenario);

    const Scenario& scenario() const { return *scenario_; }
    std::shared_ptr<const Scenario> scenario_ptr() const { return scenario_; }
    const Frame& frame() const;

    std::string current_frame;
    std::optional<std::string> focus;
    std::vector<std::string> history;  // frames visited, in order
    Terminal terminal = Terminal::None;
    std::set<std::string> dismissed;  // "frame/overlay"
    std::map<std::string, std::string> typed;  // "frame/element" -> text

    bool overlay_active(const std::string& frame_id, const std::string& overlay_id) const;
    std::vector<const Overlay*> active_overlays() const;  // declaration order

    // Test hooks for hit-testing round trips.
    void dismiss(const std::string& overlay_id);
    void restore(const std::string& overlay_id);

private:
    std::shared_ptr<const Scenario> scenario_;
};

EnvState load_scenario(const Scenario& s);
EnvState load_scenario(std::shared_ptr<const Scenario> s);

struct HitTarget {
    const Element* element = nullptr;
    const Overlay* overlay = nullptr;  // owning overlay, or the overlay body itself
    bool background() const { return element == nullptr && overlay == nullptr; }
    std::string id() const;
};

// Topmost element under `c`. Throws OutOfBounds outside [0,1]^2.
HitTarget hit_test(const EnvState& env, Coord c);

enum class ActionStatus { OK, FAIL, UNKNOWN };
std::string to_string(ActionStatus s);

struct Action {
    ActionKind kind = ActionKind::Click;
    std::optional<Coord> at;  // click / scroll position
    std::string text;         // type
    std::string key;          // press / hotkey, "CTRL+L"
    std::string direction;    // scroll
};

struct ActionOutcome {
    ActionStatus status = ActionStatus::OK;
    bool screen_changed = false;
    std::string target;  // element hit or transition used
    std::string note;
};

ActionOutcome apply_action(EnvState& env, const Action& a);

// Visual digest: what a screenshot would show. DOM and frame ids are
// not part of it.
std::string snapshot_digest(const EnvState& env);

bool evaluate_goal(const EnvState& env, const Goal& g);
bool evaluate_goal(const EnvState& env);

}  // namespace cuaplan::env
