#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cuaplan/env/env.hpp"

namespace cuaplan::env {

struct DomNode {
    std::string id;
    std::string role;
    std::string label;
    Rect bounds;
    std::string tag;
    std::vector<DomNode> children;
};

// Accessibility tree of the current frame; nullopt when the frame kind
// has none.
std::optional<DomNode> dom_tree(const EnvState& env);

// One line per node: `[role] "label" @x0,y0,x1,y1 {tag}`, indented by depth.
std::string render_dom(const EnvState& env);
std::string render_dom(const DomNode& root);

struct VisualItem {
    std::string id;
    std::string label;
    std::string kind;  // element kind, or the overlay kind for overlay bodies
    Rect bounds;
    std::string overlay;     // owning overlay id
    bool ad_hosted = false;  // drawn inside an advertisement slot
    bool occluded = false;   // covered by an active overlay
    bool perturbed = false;  // carries a patch aimed at this viewer
};

struct VisualView {
    std::string frame_id;
    FrameKind kind = FrameKind::Desktop;
    std::string url;
    std::string title;
    std::string app;
    std::string description;
    std::string focus;
    std::vector<VisualItem> items;  // topmost first

    const VisualItem* item(const std::string& id) const;
    // Topmost item containing `c`.
    const VisualItem* at(Coord c) const;
};

// Structured stand-in for a screenshot as seen by `viewer`. Adversarial
// patches are only reported to the viewer they target.
VisualView render_visual(const EnvState& env, const std::string& viewer = "");

// Serialized visible text of the page, including DOM-present overlays.
std::string page_text(const EnvState& env, bool include_navigation);

// Depth-first visit helpers.
void for_each_node(const DomNode& root, const std::function<void(const DomNode&, const std::vector<const DomNode*>&)>& f);

}  // namespace cuaplan::env
