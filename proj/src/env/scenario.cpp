#include "cuaplan/env/scenario.hpp"

#include <set>

namespace cuaplan::env {

using nlohmann::json;

SchemaError::SchemaError(std::string path, const std::string& message)
    : std::runtime_error("scenario schema error at " + path + ": " + message), path_(std::move(path)) {}

std::string to_string(FrameKind k) {
    switch (k) {
        case FrameKind::Desktop: return "desktop";
        case FrameKind::BrowserNewTab: return "browser-newtab";
        case FrameKind::Webpage: return "webpage";
        case FrameKind::Application: return "application";
    }
    return "desktop";
}

std::string to_string(ElementKind k) {
    switch (k) {
        case ElementKind::Button: return "button";
        case ElementKind::Link: return "link";
        case ElementKind::Field: return "field";
        case ElementKind::Banner: return "banner";
        case ElementKind::AdImage: return "ad-image";
        case ElementKind::Text: return "text";
        case ElementKind::Icon: return "icon";
    }
    return "text";
}

std::string to_string(ActionKind k) {
    switch (k) {
        case ActionKind::Click: return "click";
        case ActionKind::Type: return "type";
        case ActionKind::Press: return "press";
        case ActionKind::Hotkey: return "hotkey";
        case ActionKind::Scroll: return "scroll";
    }
    return "click";
}

FrameKind frame_kind_from_string(const std::string& s) {
    for (auto k : {FrameKind::Desktop, FrameKind::BrowserNewTab, FrameKind::Webpage, FrameKind::Application}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown frame kind '" + s + "'");
}

ElementKind element_kind_from_string(const std::string& s) {
    for (auto k : {ElementKind::Button, ElementKind::Link, ElementKind::Field, ElementKind::Banner,
                   ElementKind::AdImage, ElementKind::Text, ElementKind::Icon}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown element kind '" + s + "'");
}

ActionKind action_kind_from_string(const std::string& s) {
    for (auto k : {ActionKind::Click, ActionKind::Type, ActionKind::Press, ActionKind::Hotkey,
                   ActionKind::Scroll}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown action '" + s + "'");
}

std::string default_role(ElementKind k) {
    switch (k) {
        case ElementKind::Button: return "push-button";
        case ElementKind::Link: return "link";
        case ElementKind::Field: return "entry";
        case ElementKind::Banner: return "frame";
        case ElementKind::AdImage: return "frame";
        case ElementKind::Text: return "text";
        case ElementKind::Icon: return "push-button";
    }
    return "text";
}

const Element* Frame::element(const std::string& id) const {
    for (const auto& e : elements) {
        if (e.id == id) return &e;
    }
    for (const auto& o : overlays) {
        for (const auto& e : o.elements) {
            if (e.id == id) return &e;
        }
    }
    return nullptr;
}

const Overlay* Frame::overlay(const std::string& id) const {
    for (const auto& o : overlays) {
        if (o.id == id) return &o;
    }
    return nullptr;
}

const Frame* Scenario::frame(const std::string& id) const {
    for (const auto& f : frames) {
        if (f.id == id) return &f;
    }
    return nullptr;
}

Frame* Scenario::frame(const std::string& id) {
    for (auto& f : frames) {
        if (f.id == id) return &f;
    }
    return nullptr;
}

const Element* Scenario::element(const std::string& frame_id, const std::string& element_id) const {
    const Frame* f = frame(frame_id);
    return f ? f->element(element_id) : nullptr;
}

namespace {

template <class T>
T field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(path, "missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(path + "." + key, e.what());
    }
}

template <class T>
T optional_field(const json& j, const std::string& key, T fallback, const std::string& path) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(path + "." + key, e.what());
    }
}

Rect rect_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) throw SchemaError(path, "bounds must be [x0, y0, x1, y1]");
    Rect r{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    if (!r.valid()) throw SchemaError(path, "bounds must be an ordered box inside [0,1]^2");
    return r;
}

json rect_to(const Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }

Element element_from(const json& j, const std::string& path) {
    Element e;
    e.id = field<std::string>(j, "id", path);
    e.label = optional_field<std::string>(j, "label", "", path);
    try {
        e.kind = element_kind_from_string(field<std::string>(j, "kind", path));
    } catch (const std::invalid_argument& ex) {
        throw SchemaError(path + ".kind", ex.what());
    }
    e.role = optional_field<std::string>(j, "role", default_role(e.kind), path);
    e.bounds = rect_from(field<json>(j, "bounds", path), path + ".bounds");
    e.dom = optional_field<bool>(j, "dom", true, path);
    e.visible = optional_field<bool>(j, "visible", true, path);
    bool default_clickable = e.kind == ElementKind::Button || e.kind == ElementKind::Link ||
                             e.kind == ElementKind::Icon;
    e.clickable = optional_field<bool>(j, "clickable", default_clickable, path);
    e.tag = optional_field<std::string>(j, "tag", e.kind == ElementKind::AdImage ? "Advertisement" : "", path);
    e.perturbation = optional_field<std::string>(j, "perturbation", "", path);
    return e;
}

json element_to(const Element& e) {
    json j = {{"id", e.id},         {"label", e.label}, {"kind", to_string(e.kind)},
              {"role", e.role},     {"bounds", rect_to(e.bounds)},
              {"dom", e.dom},       {"visible", e.visible}, {"clickable", e.clickable},
              {"tag", e.tag}};
    if (!e.perturbation.empty()) j["perturbation"] = e.perturbation;
    return j;
}

Overlay overlay_from(const json& j, const std::string& path) {
    Overlay o;
    o.id = field<std::string>(j, "id", path);
    o.kind = optional_field<std::string>(j, "kind", "popup", path);
    o.label = optional_field<std::string>(j, "label", "", path);
    o.bounds = rect_from(field<json>(j, "bounds", path), path + ".bounds");
    o.ad_slot = optional_field<std::string>(j, "ad_slot", "", path);
    o.in_dom = optional_field<bool>(j, "in_dom", true, path);
    o.dom_role = optional_field<std::string>(j, "dom_role", "frame", path);
    o.dom_tag = optional_field<std::string>(j, "dom_tag", "", path);
    if (j.contains("elements")) {
        const json& els = j.at("elements");
        for (std::size_t i = 0; i < els.size(); ++i) {
            o.elements.push_back(element_from(els[i], path + ".elements[" + std::to_string(i) + "]"));
        }
    }
    return o;
}

json overlay_to(const Overlay& o) {
    json els = json::array();
    for (const auto& e : o.elements) els.push_back(element_to(e));
    return {{"id", o.id},         {"kind", o.kind},       {"label", o.label},
            {"bounds", rect_to(o.bounds)}, {"ad_slot", o.ad_slot}, {"in_dom", o.in_dom},
            {"dom_role", o.dom_role}, {"dom_tag", o.dom_tag}, {"elements", els}};
}

Frame frame_from(const json& j, const std::string& path) {
    Frame f;
    f.id = field<std::string>(j, "id", path);
    try {
        f.kind = frame_kind_from_string(field<std::string>(j, "kind", path));
    } catch (const std::invalid_argument& ex) {
        throw SchemaError(path + ".kind", ex.what());
    }
    f.url = optional_field<std::string>(j, "url", "", path);
    f.app = optional_field<std::string>(j, "app", "", path);
    f.title = optional_field<std::string>(j, "title", "", path);
    f.description = optional_field<std::string>(j, "description", "", path);
    f.page_text = optional_field<std::string>(j, "page_text", "", path);
    if (j.contains("elements")) {
        const json& els = j.at("elements");
        for (std::size_t i = 0; i < els.size(); ++i) {
            f.elements.push_back(element_from(els[i], path + ".elements[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("overlays")) {
        const json& ovs = j.at("overlays");
        for (std::size_t i = 0; i < ovs.size(); ++i) {
            f.overlays.push_back(overlay_from(ovs[i], path + ".overlays[" + std::to_string(i) + "]"));
        }
    }
    return f;
}

json frame_to(const Frame& f) {
    json els = json::array();
    for (const auto& e : f.elements) els.push_back(element_to(e));
    json ovs = json::array();
    for (const auto& o : f.overlays) ovs.push_back(overlay_to(o));
    return {{"id", f.id},       {"kind", to_string(f.kind)}, {"url", f.url},
            {"app", f.app},     {"title", f.title},          {"description", f.description},
            {"page_text", f.page_text}, {"elements", els},   {"overlays", ovs}};
}

Effect effect_from(const json& j, const std::string& path) {
    if (j.is_string() && j.get<std::string>() == "none") return {};
    if (!j.is_object() || j.size() != 1) throw SchemaError(path, "effect must be an object with one key");
    auto it = j.begin();
    Effect e;
    const std::string& k = it.key();
    if (k == "navigate") {
        e.kind = Effect::Kind::Navigate;
    } else if (k == "focus") {
        e.kind = Effect::Kind::Focus;
    } else if (k == "dismiss") {
        e.kind = Effect::Kind::Dismiss;
    } else if (k == "terminal") {
        e.kind = Effect::Kind::Terminal;
    } else if (k == "none") {
        return {};
    } else {
        throw SchemaError(path, "unknown effect '" + k + "'");
    }
    if (!it.value().is_string()) throw SchemaError(path + "." + k, "effect target must be a string");
    e.target = it.value().get<std::string>();
    return e;
}

json effect_to(const Effect& e) {
    switch (e.kind) {
        case Effect::Kind::Navigate: return {{"navigate", e.target}};
        case Effect::Kind::Focus: return {{"focus", e.target}};
        case Effect::Kind::Dismiss: return {{"dismiss", e.target}};
        case Effect::Kind::Terminal: return {{"terminal", e.target}};
        case Effect::Kind::None: break;
    }
    return "none";
}

Transition transition_from(const json& j, const std::string& path) {
    Transition t;
    t.frame = optional_field<std::string>(j, "frame", "*", path);
    try {
        t.action = action_kind_from_string(field<std::string>(j, "action", path));
    } catch (const std::invalid_argument& ex) {
        throw SchemaError(path + ".action", ex.what());
    }
    t.element = optional_field<std::string>(j, "element", "", path);
    t.focus = optional_field<std::string>(j, "focus", "", path);
    t.text = optional_field<std::string>(j, "text", "", path);
    t.key = optional_field<std::string>(j, "key", "", path);
    t.direction = optional_field<std::string>(j, "direction", "", path);
    t.effect = effect_from(field<json>(j, "effect", path), path + ".effect");
    if (t.action == ActionKind::Click && t.element.empty()) {
        throw SchemaError(path, "click transitions need an element");
    }
    return t;
}

json transition_to(const Transition& t) {
    json j = {{"frame", t.frame}, {"action", to_string(t.action)}, {"effect", effect_to(t.effect)}};
    if (!t.element.empty()) j["element"] = t.element;
    if (!t.focus.empty()) j["focus"] = t.focus;
    if (!t.text.empty()) j["text"] = t.text;
    if (!t.key.empty()) j["key"] = t.key;
    if (!t.direction.empty()) j["direction"] = t.direction;
    return j;
}

}  // namespace

Goal Goal::from_json(const json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1) throw SchemaError(path, "goal must be an object with one key");
    auto it = j.begin();
    Goal g;
    g.op = it.key();
    const json& v = it.value();
    if (g.op == "all" || g.op == "any") {
        if (!v.is_array() || v.empty()) throw SchemaError(path + "." + g.op, "expects a non-empty list");
        for (std::size_t i = 0; i < v.size(); ++i) {
            g.children.push_back(from_json(v[i], path + "." + g.op + "[" + std::to_string(i) + "]"));
        }
    } else if (g.op == "not") {
        g.children.push_back(from_json(v, path + ".not"));
    } else if (g.op == "typed") {
        g.arg = field<std::string>(v, "element", path + ".typed");
        g.text = field<std::string>(v, "text", path + ".typed");
    } else if (g.op == "frame" || g.op == "visited" || g.op == "dismissed" || g.op == "focus" ||
               g.op == "terminal") {
        if (!v.is_string()) throw SchemaError(path + "." + g.op, "expects a string");
        g.arg = v.get<std::string>();
    } else {
        throw SchemaError(path, "unknown goal predicate '" + g.op + "'");
    }
    return g;
}

json Goal::to_json() const {
    if (op == "all" || op == "any") {
        json arr = json::array();
        for (const auto& c : children) arr.push_back(c.to_json());
        return {{op, arr}};
    }
    if (op == "not") return {{op, children.at(0).to_json()}};
    if (op == "typed") return {{op, {{"element", arg}, {"text", text}}}};
    return {{op, arg}};
}

void check_scenario(const Scenario& s) {
    if (s.schema_version != kSchemaVersion) {
        throw SchemaError("schema_version", "unsupported version " + std::to_string(s.schema_version));
    }
    if (s.frames.empty()) throw SchemaError("frames", "at least one frame is required");
    std::set<std::string> frame_ids;
    for (std::size_t i = 0; i < s.frames.size(); ++i) {
        const Frame& f = s.frames[i];
        std::string fpath = "frames[" + std::to_string(i) + "]";
        if (!frame_ids.insert(f.id).second) throw SchemaError(fpath + ".id", "duplicate frame id '" + f.id + "'");
        std::set<std::string> ids;
        for (const auto& e : f.elements) {
            if (!ids.insert(e.id).second) throw SchemaError(fpath, "duplicate element id '" + e.id + "'");
        }
        for (const auto& o : f.overlays) {
            if (!ids.insert(o.id).second) throw SchemaError(fpath, "duplicate id '" + o.id + "'");
            if (!o.ad_slot.empty() && f.element(o.ad_slot) == nullptr) {
                throw SchemaError(fpath + ".overlays." + o.id, "ad_slot '" + o.ad_slot + "' is not an element");
            }
            for (const auto& e : o.elements) {
                if (!ids.insert(e.id).second) throw SchemaError(fpath, "duplicate element id '" + e.id + "'");
                if (!o.bounds.contains(e.bounds)) {
                    throw SchemaError(fpath + ".overlays." + o.id + "." + e.id, "element lies outside its overlay");
                }
            }
        }
    }
    if (!s.frame(s.initial_frame)) throw SchemaError("initial_frame", "unknown frame '" + s.initial_frame + "'");
    for (std::size_t i = 0; i < s.transitions.size(); ++i) {
        const Transition& t = s.transitions[i];
        std::string tpath = "transitions[" + std::to_string(i) + "]";
        if (t.frame != "*" && !s.frame(t.frame)) throw SchemaError(tpath + ".frame", "unknown frame '" + t.frame + "'");
        if (t.effect.kind == Effect::Kind::Navigate && !s.frame(t.effect.target)) {
            throw SchemaError(tpath + ".effect", "navigation to unknown frame '" + t.effect.target + "'");
        }
        if (t.effect.kind == Effect::Kind::Terminal && t.effect.target != "done" && t.effect.target != "fail") {
            throw SchemaError(tpath + ".effect", "terminal effect must be 'done' or 'fail'");
        }
        if (t.action == ActionKind::Click && t.frame != "*") {
            const Frame* f = s.frame(t.frame);
            if (!f->element(t.element) && !f->overlay(t.element)) {
                throw SchemaError(tpath + ".element", "unknown element '" + t.element + "'");
            }
        }
    }
    // Every declared clickable element has an entry in the transition table.
    for (const auto& f : s.frames) {
        auto check = [&](const Element& e) {
            if (!e.clickable) return;
            for (const auto& t : s.transitions) {
                if (t.action == ActionKind::Click && t.element == e.id && (t.frame == "*" || t.frame == f.id)) {
                    return;
                }
            }
            throw SchemaError("frames." + f.id + "." + e.id, "clickable element has no click transition");
        };
        for (const auto& e : f.elements) check(e);
        for (const auto& o : f.overlays) {
            for (const auto& e : o.elements) check(e);
        }
    }
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("$", "scenario must be a JSON object");
    Scenario s;
    s.schema_version = field<int>(j, "schema_version", "$");
    s.id = field<std::string>(j, "id", "$");
    s.task = optional_field<std::string>(j, "task", "", "$");
    s.category = optional_field<std::string>(j, "category", "", "$");
    s.initial_frame = field<std::string>(j, "initial_frame", "$");
    const json& frames = field<json>(j, "frames", "$");
    if (!frames.is_array()) throw SchemaError("frames", "must be a list");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        s.frames.push_back(frame_from(frames[i], "frames[" + std::to_string(i) + "]"));
    }
    if (j.contains("transitions")) {
        const json& ts = j.at("transitions");
        for (std::size_t i = 0; i < ts.size(); ++i) {
            s.transitions.push_back(transition_from(ts[i], "transitions[" + std::to_string(i) + "]"));
        }
    }
    s.goal = Goal::from_json(field<json>(j, "goal", "$"));
    s.spoofed_frame = optional_field<std::string>(j, "spoofed_frame", "", "$");
    check_scenario(s);
    return s;
}

json scenario_to_json(const Scenario& s) {
    json frames = json::array();
    for (const auto& f : s.frames) frames.push_back(frame_to(f));
    json ts = json::array();
    for (const auto& t : s.transitions) ts.push_back(transition_to(t));
    json j = {{"schema_version", s.schema_version},
              {"id", s.id},
              {"task", s.task},
              {"category", s.category},
              {"initial_frame", s.initial_frame},
              {"frames", frames},
              {"transitions", ts},
              {"goal", s.goal.to_json()}};
    if (!s.spoofed_frame.empty()) j["spoofed_frame"] = s.spoofed_frame;
    return j;
}

}  // namespace cuaplan::env
