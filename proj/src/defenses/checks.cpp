#include "cuaplan/defenses/checks.hpp"

#include <stdexcept>

#include "cuaplan/util/text.hpp"

namespace cuaplan::defenses {

namespace {

const char* kAdTag = "Advertisement";

bool cookie_like(const std::string& s) {
    auto terms = text::term_set(s);
    return terms.count("cookie") || terms.count("accept");
}

bool mentions_ad(const std::string& thought) {
    for (const auto& w : text::words(thought)) {
        if (w == "ad" || w == "ads" || w.rfind("advert", 0) == 0 || w.rfind("sponsor", 0) == 0) return true;
    }
    return false;
}

struct DomHit {
    const env::DomNode* node;
    bool in_ad;
    std::string context;  // labels of the node and its ancestors
};

std::vector<DomHit> dom_hits(const env::DomNode& root, env::Coord c) {
    std::vector<DomHit> hits;
    env::for_each_node(root, [&](const env::DomNode& n, const std::vector<const env::DomNode*>& ancestors) {
        if (&n == &root || !n.bounds.contains(c)) return;
        bool ad = n.tag == kAdTag;
        std::string context = n.label;
        for (const auto* a : ancestors) {
            ad = ad || a->tag == kAdTag;
            if (a != &root) context += " " + a->label;
        }
        hits.push_back({&n, ad, context});
    });
    return hits;
}

bool near_dom_ad(const env::DomNode& root, const env::Rect& r, double limit) {
    bool near = false;
    env::for_each_node(root, [&](const env::DomNode& n, const std::vector<const env::DomNode*>&) {
        if (n.tag == kAdTag && n.bounds.distance_to(r) <= limit) near = true;
    });
    return near;
}

}  // namespace

SuspicionRules SuspicionRules::lenient() {
    SuspicionRules r;
    r.fake_banner_distance = 0.0;
    return r;
}

SuspicionRules SuspicionRules::from_profile(const std::string& name) {
    if (name == "aggressive") return aggressive();
    if (name == "lenient") return lenient();
    throw std::invalid_argument("unknown heuristic profile '" + name + "'");
}

Verdict dom_consistency_check(const CheckInput& in, const SuspicionRules& rules) {
    if (!in.dom) return Verdict::unavailable("no DOM for this frame");
    if (!in.locates()) return Verdict::benign("no coordinates to cross-check");
    if (!in.start) return Verdict::benign("no coordinates proposed");

    auto hits = dom_hits(*in.dom, *in.start);
    if (rules.ad_region) {
        for (const auto& h : hits) {
            if (h.in_ad) return Verdict::attacked("advertisement frame");
        }
    }
    if (rules.fake_banner_distance > 0) {
        for (const auto& h : hits) {
            if (cookie_like(h.context) && near_dom_ad(*in.dom, h.node->bounds, rules.fake_banner_distance)) {
                return Verdict::attacked("consent control adjacent to advertisement");
            }
        }
    }
    if (rules.label_mismatch) {
        const auto wanted = text::term_set(in.instruction);
        for (const auto& h : hits) {
            if (text::overlap(text::term_set(h.node->label), wanted) > 0) return Verdict::benign();
            if (!h.node->label.empty() && text::contains_ci(in.thought, h.node->label)) return Verdict::benign();
        }
        return Verdict::attacked(hits.empty() ? "no DOM node at proposed point" : "DOM label mismatch");
    }
    return Verdict::benign();
}

Verdict visual_consensus_check(const CheckInput& in, const SuspicionRules& rules,
                               const oracles::ConsistencyChecker& consistency) {
    if (!in.visual) return Verdict::unavailable("no screenshot");
    if (in.tool == "verify_hypothesis") {
        // A confirmed hypothesis should share some vocabulary with what was observed.
        if (rules.thought_consistency && in.status == "OK" &&
            text::overlap(text::term_set(in.instruction), text::term_set(in.observation)) == 0) {
            return Verdict::attacked("verification unsupported by observation");
        }
        return Verdict::benign();
    }
    if (!in.locates() || !in.start) return Verdict::benign("no coordinates proposed");

    const env::VisualItem* target = in.visual->at(*in.start);
    if (target) {
        const bool cookie = cookie_like(target->label + " " + target->kind) ||
                            (!target->overlay.empty() && in.visual->item(target->overlay) &&
                             cookie_like(in.visual->item(target->overlay)->kind));
        if (target->ad_hosted && !mentions_ad(in.thought)) {
            return Verdict::attacked(cookie ? "cookie banner inside ad slot" : "target inside ad slot");
        }
        if (cookie && rules.fake_banner_distance > 0) {
            for (const auto& item : in.visual->items) {
                if (item.kind != "ad-image" || item.id == target->id) continue;
                if (item.bounds.distance_to(target->bounds) <= rules.fake_banner_distance) {
                    return Verdict::attacked("cookie banner next to advertisement");
                }
            }
        }
    }
    if (rules.thought_consistency && !consistency.consistent(in.thought, in.instruction)) {
        return Verdict::attacked("thought does not match instruction");
    }
    return Verdict::benign();
}

Verdict multimodal_consensus_check(const CheckInput& in, const SuspicionRules& rules,
                                   const oracles::ConsistencyChecker& consistency) {
    Verdict dom = dom_consistency_check(in, rules);
    if (dom.attacked()) return dom;
    Verdict visual = visual_consensus_check(in, rules, consistency);
    if (visual.decision == Decision::Benign && dom.decision == Decision::Unavailable) {
        visual.reason = visual.reason.empty() ? "DOM unavailable" : visual.reason + "; DOM unavailable";
    }
    return visual;
}

RuleVisualChecker::RuleVisualChecker(SuspicionRules rules, oracles::ConsistencyPtr consistency)
    : rules_(rules),
      consistency_(consistency ? std::move(consistency) : std::make_shared<oracles::KeywordConsistency>()) {}

Verdict RuleVisualChecker::check(const CheckInput& in) const {
    return visual_consensus_check(in, rules_, *consistency_);
}

}  // namespace cuaplan::defenses
