#include "cuaplan/env/env.hpp"

#include <sstream>

#include "cuaplan/env/views.hpp"
#include "cuaplan/util/digest.hpp"
#include "cuaplan/util/text.hpp"

namespace cuaplan::env {

OutOfBounds::OutOfBounds(Coord c)
    : std::runtime_error("coordinate (" + text::format_number(c.x) + ", " + text::format_number(c.y) +
                         ") lies outside the unit square"),
      coord(c) {}

NoPage::NoPage(const std::string& frame_id)
    : std::runtime_error("frame '" + frame_id + "' is not a web page") {}

std::string to_string(ActionStatus s) {
    switch (s) {
        case ActionStatus::OK: return "OK";
        case ActionStatus::FAIL: return "FAIL";
        case ActionStatus::UNKNOWN: return "UNKNOWN";
    }
    return "UNKNOWN";
}

EnvState::EnvState(std::shared_ptr<const Scenario> scenario) : scenario_(std::move(scenario)) {
    current_frame = scenario_->initial_frame;
    history.push_back(current_frame);
}

const Frame& EnvState::frame() const { return *scenario_->frame(current_frame); }

bool EnvState::overlay_active(const std::string& frame_id, const std::string& overlay_id) const {
    return dismissed.count(frame_id + "/" + overlay_id) == 0;
}

std::vector<const Overlay*> EnvState::active_overlays() const {
    std::vector<const Overlay*> out;
    for (const auto& o : frame().overlays) {
        if (overlay_active(current_frame, o.id)) out.push_back(&o);
    }
    return out;
}

void EnvState::dismiss(const std::string& overlay_id) { dismissed.insert(current_frame + "/" + overlay_id); }

void EnvState::restore(const std::string& overlay_id) { dismissed.erase(current_frame + "/" + overlay_id); }

EnvState load_scenario(const Scenario& s) { return EnvState(std::make_shared<const Scenario>(s)); }

EnvState load_scenario(std::shared_ptr<const Scenario> s) { return EnvState(std::move(s)); }

std::string HitTarget::id() const {
    if (element) return element->id;
    if (overlay) return overlay->id;
    return "";
}

HitTarget hit_test(const EnvState& env, Coord c) {
    if (!c.in_unit_square()) throw OutOfBounds(c);
    auto overlays = env.active_overlays();
    for (auto it = overlays.rbegin(); it != overlays.rend(); ++it) {
        const Overlay* o = *it;
        for (auto e = o->elements.rbegin(); e != o->elements.rend(); ++e) {
            if (e->visible && e->bounds.contains(c)) return {&*e, o};
        }
        if (o->bounds.contains(c)) return {nullptr, o};
    }
    const auto& els = env.frame().elements;
    for (auto e = els.rbegin(); e != els.rend(); ++e) {
        if (e->visible && e->bounds.contains(c)) return {&*e, nullptr};
    }
    return {};
}

namespace {

bool frame_matches(const Transition& t, const std::string& frame_id) {
    return t.frame == "*" || t.frame == frame_id;
}

std::string normalize_typed(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return text::to_lower(s);
}

const Transition* find_transition(const EnvState& env, ActionKind kind,
                                  const std::function<bool(const Transition&)>& pred) {
    for (const auto& t : env.scenario().transitions) {
        if (t.action == kind && frame_matches(t, env.current_frame) && pred(t)) return &t;
    }
    return nullptr;
}

void apply_effect(EnvState& env, const Effect& e) {
    switch (e.kind) {
        case Effect::Kind::Navigate:
            env.current_frame = e.target;
            env.history.push_back(e.target);
            env.focus.reset();
            break;
        case Effect::Kind::Focus: env.focus = e.target; break;
        case Effect::Kind::Dismiss: env.dismiss(e.target); break;
        case Effect::Kind::Terminal: env.terminal = e.target == "done" ? Terminal::Done : Terminal::Fail; break;
        case Effect::Kind::None: break;
    }
}

ActionOutcome click(EnvState& env, const Action& a) {
    ActionOutcome out;
    if (!a.at) {
        out.status = ActionStatus::FAIL;
        out.note = "click without coordinates";
        return out;
    }
    HitTarget hit = hit_test(env, *a.at);
    if (hit.background()) {
        out.note = "background";
        return out;
    }
    std::string id = hit.id();
    out.target = id;
    const Transition* t = find_transition(env, ActionKind::Click, [&](const Transition& tr) { return tr.element == id; });
    if (t) {
        apply_effect(env, t->effect);
        return out;
    }
    if (hit.element && hit.element->kind == ElementKind::Field) {
        env.focus = hit.element->id;
        return out;
    }
    out.status = ActionStatus::UNKNOWN;
    out.note = "no transition for '" + id + "'";
    return out;
}

ActionOutcome type(EnvState& env, const Action& a) {
    ActionOutcome out;
    if (!env.focus) {
        out.status = ActionStatus::UNKNOWN;
        out.note = "nothing focused";
        return out;
    }
    const std::string focus = *env.focus;
    out.target = focus;
    const std::string typed = normalize_typed(a.text);
    const Transition* t = find_transition(env, ActionKind::Type, [&](const Transition& tr) {
        return (tr.focus.empty() || tr.focus == focus) && (tr.text.empty() || normalize_typed(tr.text) == typed);
    });
    if (t) {
        apply_effect(env, t->effect);
        return out;
    }
    std::string text = a.text;
    while (!text.empty() && text.back() == '\n') text.pop_back();
    env.typed[env.current_frame + "/" + focus] += text;
    return out;
}

ActionOutcome key_action(EnvState& env, const Action& a) {
    ActionOutcome out;
    out.target = a.key;
    const std::string focus = env.focus.value_or("");
    const Transition* t = find_transition(env, a.kind, [&](const Transition& tr) {
        return text::to_lower(tr.key) == text::to_lower(a.key) && (tr.focus.empty() || tr.focus == focus);
    });
    if (t) {
        apply_effect(env, t->effect);
        return out;
    }
    if (a.kind == ActionKind::Hotkey && text::to_lower(a.key) == "ctrl+l" && env.frame().is_browser()) {
        env.focus = "address-bar";
    }
    return out;
}

ActionOutcome scroll(EnvState& env, const Action& a) {
    ActionOutcome out;
    if (a.at && !a.at->in_unit_square()) throw OutOfBounds(*a.at);
    const Transition* t = find_transition(env, ActionKind::Scroll, [&](const Transition& tr) {
        return tr.direction.empty() || text::to_lower(tr.direction) == text::to_lower(a.direction);
    });
    if (t) apply_effect(env, t->effect);
    return out;
}

}  // namespace

ActionOutcome apply_action(EnvState& env, const Action& a) {
    std::string before = snapshot_digest(env);
    ActionOutcome out;
    switch (a.kind) {
        case ActionKind::Click: out = click(env, a); break;
        case ActionKind::Type: out = type(env, a); break;
        case ActionKind::Press:
        case ActionKind::Hotkey: out = key_action(env, a); break;
        case ActionKind::Scroll: out = scroll(env, a); break;
    }
    out.screen_changed = snapshot_digest(env) != before;
    return out;
}

std::string snapshot_digest(const EnvState& env) {
    const Frame& f = env.frame();
    std::ostringstream os;
    os << to_string(f.kind) << '|' << f.url << '|' << f.title << '|' << f.app << '|' << f.description << '\n';
    for (const auto& item : render_visual(env, "").items) {
        os << item.id << '|' << item.label << '|' << item.kind << '|' << item.bounds.x0 << ','
           << item.bounds.y0 << ',' << item.bounds.x1 << ',' << item.bounds.y1 << '|' << item.overlay
           << '|' << item.occluded << '\n';
    }
    for (const auto& e : f.elements) {
        if (!e.perturbation.empty()) os << "patch|" << e.id << '|' << e.perturbation << '\n';
    }
    for (const auto& [key, text] : env.typed) {
        if (key.rfind(env.current_frame + "/", 0) == 0) os << "typed|" << key << '|' << text << '\n';
    }
    os << "focus|" << env.focus.value_or("") << '\n';
    return sha256_hex(os.str());
}

bool evaluate_goal(const EnvState& env, const Goal& g) {
    if (g.op == "frame") return env.current_frame == g.arg;
    if (g.op == "visited") {
        for (const auto& h : env.history) {
            if (h == g.arg) return true;
        }
        return false;
    }
    if (g.op == "dismissed") {
        for (const auto& d : env.dismissed) {
            auto slash = d.find('/');
            if (slash != std::string::npos && d.substr(slash + 1) == g.arg) return true;
        }
        return false;
    }
    if (g.op == "typed") {
        for (const auto& [key, text] : env.typed) {
            auto slash = key.find('/');
            if (slash != std::string::npos && key.substr(slash + 1) == g.arg &&
                normalize_typed(text) == normalize_typed(g.text)) {
                return true;
            }
        }
        return false;
    }
    if (g.op == "focus") return env.focus && *env.focus == g.arg;
    if (g.op == "terminal") {
        return (g.arg == "done" && env.terminal == Terminal::Done) ||
               (g.arg == "fail" && env.terminal == Terminal::Fail);
    }
    if (g.op == "all") {
        for (const auto& c : g.children) {
            if (!evaluate_goal(env, c)) return false;
        }
        return true;
    }
    if (g.op == "any") {
        for (const auto& c : g.children) {
            if (evaluate_goal(env, c)) return true;
        }
        return false;
    }
    if (g.op == "not") return !evaluate_goal(env, g.children.at(0));
    return false;
}

bool evaluate_goal(const EnvState& env) { return evaluate_goal(env, env.scenario().goal); }

}  // namespace cuaplan::env
