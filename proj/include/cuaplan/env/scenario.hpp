#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuaplan/env/geometry.hpp"

namespace cuaplan::env {

inline constexpr int kSchemaVersion = 1;

class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& message);
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

enum class FrameKind { Desktop, BrowserNewTab, Webpage, Application };
enum class ElementKind { Button, Link, Field, Banner, AdImage, Text, Icon };

std::string to_string(FrameKind k);
std::string to_string(ElementKind k);
FrameKind frame_kind_from_string(const std::string& s);
ElementKind element_kind_from_string(const std::string& s);

// Accessibility role an element of this kind exposes when none is given.
std::string default_role(ElementKind k);

struct Element {
    std::string id;
    std::string label;
    ElementKind kind = ElementKind::Text;
    std::string role;
    Rect bounds;
    bool dom = true;       // present in the accessibility tree
    bool visible = true;   // present in the visual layer
    bool clickable = false;
    std::string tag;           // DOM frame tag ("Advertisement" for ad images)
    std::string perturbation;  // oracle id an adversarial patch targets
};

struct Overlay {
    std::string id;
    std::string kind;  // cookie-banner, popup, fake-consent ...
    std::string label;
    Rect bounds;
    std::vector<Element> elements;
    std::string ad_slot;  // id of the ad element hosting it, if any
    bool in_dom = true;
    std::string dom_role = "frame";
    std::string dom_tag;
};

struct Frame {
    std::string id;
    FrameKind kind = FrameKind::Desktop;
    std::string url;
    std::string app;
    std::string title;
    std::string description;
    std::string page_text;
    std::vector<Element> elements;
    std::vector<Overlay> overlays;

    bool has_dom() const { return kind == FrameKind::Webpage || kind == FrameKind::BrowserNewTab; }
    bool is_browser() const { return has_dom(); }
    const Element* element(const std::string& id) const;
    const Overlay* overlay(const std::string& id) const;
};

enum class ActionKind { Click, Type, Press, Hotkey, Scroll };
std::string to_string(ActionKind k);
ActionKind action_kind_from_string(const std::string& s);

struct Effect {
    enum class Kind { Navigate, Focus, Dismiss, Terminal, None };
    Kind kind = Kind::None;
    std::string target;  // frame, element, overlay, or "done"/"fail"
};

struct Transition {
    std::string frame = "*";
    ActionKind action = ActionKind::Click;
    std::string element;    // click target (element or overlay id)
    std::string focus;      // required focus for type/press
    std::string text;       // type: expected text, case-insensitive, trailing newline ignored
    std::string key;        // press/hotkey: "ENTER", "CTRL+L"
    std::string direction;  // scroll
    Effect effect;
};

struct Goal {
    std::string op;  // frame, visited, dismissed, typed, focus, terminal, all, any, not
    std::string arg;
    std::string text;
    std::vector<Goal> children;

    static Goal from_json(const nlohmann::json& j, const std::string& path = "goal");
    nlohmann::json to_json() const;
};

struct Scenario {
    int schema_version = kSchemaVersion;
    std::string id;
    std::string task;
    std::string category;
    std::string initial_frame;
    std::vector<Frame> frames;
    std::vector<Transition> transitions;
    Goal goal;
    std::string spoofed_frame;  // set by attack mutators

    const Frame* frame(const std::string& id) const;
    Frame* frame(const std::string& id);
    // Elements (base and overlay) of a frame, by id.
    const Element* element(const std::string& frame_id, const std::string& element_id) const;
};

// Parses and checks a scenario document (no attack section handling).
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

// Structural checks shared by the loader and the attack mutators.
void check_scenario(const Scenario& s);

}  // namespace cuaplan::env
