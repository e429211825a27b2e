#include "cuaplan/env/views.hpp"

#include <sstream>

#include "cuaplan/util/text.hpp"

namespace cuaplan::env {

namespace {

DomNode node_for(const Element& e) {
    return DomNode{e.id, e.role, e.label, e.bounds, e.tag, {}};
}

std::string fmt_rect(const Rect& r) {
    std::ostringstream os;
    os << text::format_number(r.x0) << ',' << text::format_number(r.y0) << ','
       << text::format_number(r.x1) << ',' << text::format_number(r.y1);
    return os.str();
}

void render_node(std::ostringstream& os, const DomNode& n, int depth) {
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << '[' << n.role << "] \"" << n.label
       << "\" @" << fmt_rect(n.bounds);
    if (!n.tag.empty()) os << " {" << n.tag << '}';
    os << '\n';
    for (const auto& c : n.children) render_node(os, c, depth + 1);
}

void visit(const DomNode& n, std::vector<const DomNode*>& ancestors,
           const std::function<void(const DomNode&, const std::vector<const DomNode*>&)>& f) {
    f(n, ancestors);
    ancestors.push_back(&n);
    for (const auto& c : n.children) visit(c, ancestors, f);
    ancestors.pop_back();
}

}  // namespace

std::optional<DomNode> dom_tree(const EnvState& env) {
    const Frame& f = env.frame();
    if (!f.has_dom()) return std::nullopt;
    DomNode root{"document", "document", f.title, Rect{0, 0, 1, 1}, "", {}};
    for (const auto& e : f.elements) {
        if (e.dom && e.visible) root.children.push_back(node_for(e));
    }
    for (const Overlay* o : env.active_overlays()) {
        if (!o->in_dom) continue;
        DomNode n{o->id, o->dom_role, o->label, o->bounds, o->dom_tag, {}};
        for (const auto& e : o->elements) {
            if (e.dom && e.visible) n.children.push_back(node_for(e));
        }
        root.children.push_back(std::move(n));
    }
    return root;
}

std::string render_dom(const DomNode& root) {
    std::ostringstream os;
    render_node(os, root, 0);
    return os.str();
}

std::string render_dom(const EnvState& env) {
    auto tree = dom_tree(env);
    return tree ? render_dom(*tree) : std::string();
}

void for_each_node(const DomNode& root,
                   const std::function<void(const DomNode&, const std::vector<const DomNode*>&)>& f) {
    std::vector<const DomNode*> ancestors;
    visit(root, ancestors, f);
}

const VisualItem* VisualView::item(const std::string& id) const {
    for (const auto& i : items) {
        if (i.id == id) return &i;
    }
    return nullptr;
}

const VisualItem* VisualView::at(Coord c) const {
    for (const auto& i : items) {
        if (!i.occluded && i.bounds.contains(c)) return &i;
    }
    return nullptr;
}

VisualView render_visual(const EnvState& env, const std::string& viewer) {
    const Frame& f = env.frame();
    VisualView v;
    v.frame_id = f.id;
    v.kind = f.kind;
    v.url = f.url;
    v.title = f.title;
    v.app = f.app;
    v.description = f.description;
    v.focus = env.focus.value_or("");
    auto overlays = env.active_overlays();
    auto patched = [&](const Element& e) { return !e.perturbation.empty() && !viewer.empty() && e.perturbation == viewer; };
    for (auto it = overlays.rbegin(); it != overlays.rend(); ++it) {
        const Overlay* o = *it;
        bool ad = !o->ad_slot.empty();
        for (auto e = o->elements.rbegin(); e != o->elements.rend(); ++e) {
            if (!e->visible) continue;
            v.items.push_back({e->id, e->label, to_string(e->kind), e->bounds, o->id, ad, false, patched(*e)});
        }
        v.items.push_back({o->id, o->label, o->kind, o->bounds, o->id, ad, false, false});
    }
    for (auto e = f.elements.rbegin(); e != f.elements.rend(); ++e) {
        if (!e->visible) continue;
        bool covered = false;
        for (const Overlay* o : overlays) covered = covered || o->bounds.contains(e->bounds.center());
        v.items.push_back({e->id, e->label, to_string(e->kind), e->bounds, "",
                           e->kind == ElementKind::AdImage, covered, patched(*e)});
    }
    return v;
}

std::string page_text(const EnvState& env, bool include_navigation) {
    const Frame& f = env.frame();
    if (!f.has_dom()) throw NoPage(f.id);
    std::string out = f.page_text;
    auto add = [&](const std::string& s) {
        if (s.empty()) return;
        if (!out.empty()) out += '\n';
        out += s;
    };
    if (include_navigation) {
        std::string nav;
        for (const auto& e : f.elements) {
            if (e.dom && e.visible && e.kind == ElementKind::Link) nav += (nav.empty() ? "" : " | ") + e.label;
        }
        if (!nav.empty()) add("Navigation: " + nav);
    }
    for (const Overlay* o : env.active_overlays()) {
        if (!o->in_dom) continue;
        add(o->label);
        for (const auto& e : o->elements) {
            if (e.dom && e.visible) add(e.label);
        }
    }
    return out;
}

}  // namespace cuaplan::env
