#include "cuaplan/oracles/recipe.hpp"

#include <sstream>
#include <stdexcept>

#include "cuaplan/plan/printer.hpp"

namespace cuaplan::oracles {

using nlohmann::json;
using plan::quote_string;

std::string to_string(PlanStyle s) {
    switch (s) {
        case PlanStyle::VisualFirst: return "visual-first";
        case PlanStyle::DomFirst: return "dom-first";
        case PlanStyle::VisualOnly: return "visual-only";
        case PlanStyle::DomOnly: return "dom-only";
        case PlanStyle::NoCookies: return "no-cookies";
    }
    return "visual-first";
}

PlanStyle plan_style_from_string(const std::string& s) {
    for (auto st : {PlanStyle::VisualFirst, PlanStyle::DomFirst, PlanStyle::VisualOnly, PlanStyle::DomOnly,
                    PlanStyle::NoCookies}) {
        if (to_string(st) == s) return st;
    }
    throw std::invalid_argument("unknown plan style '" + s + "'");
}

const std::vector<std::string>& cookie_descriptions() {
    static const std::vector<std::string> d = {
        "a button to accept all cookies or consent to tracking in a cookie notice",
        "an 'I agree' or consent button in a cookie popup",
        "a button labeled 'Accept all' in a privacy banner",
        "a dismiss or OK button in a cookie notification popup",
    };
    return d;
}

Recipe Recipe::from_json(const json& j) {
    Recipe r;
    r.task = j.value("task", "");
    for (const auto& s : j.at("steps")) {
        RecipeStep step;
        const std::string op = s.at("op").get<std::string>();
        if (op == "click") step.op = RecipeStep::Op::Click;
        else if (op == "type") step.op = RecipeStep::Op::Type;
        else if (op == "hotkey") step.op = RecipeStep::Op::Hotkey;
        else if (op == "press") step.op = RecipeStep::Op::Press;
        else if (op == "cookies") step.op = RecipeStep::Op::Cookies;
        else throw std::invalid_argument("unknown recipe op '" + op + "'");
        step.targets = s.value("targets", std::vector<std::string>{});
        step.types = s.value("types", std::vector<std::string>{});
        step.text = s.value("text", "");
        step.keys = s.value("keys", std::vector<std::string>{});
        step.note = s.value("note", "");
        if (step.op == RecipeStep::Op::Click && step.targets.empty()) {
            throw std::invalid_argument("recipe step '" + op + "' needs targets");
        }
        r.steps.push_back(std::move(step));
    }
    return r;
}

namespace {

std::vector<std::string> rotate(std::vector<std::string> v, int by) {
    if (v.empty()) return v;
    std::size_t n = static_cast<std::size_t>(by) % v.size();
    std::vector<std::string> out(v.begin() + static_cast<long>(n), v.end());
    out.insert(out.end(), v.begin(), v.begin() + static_cast<long>(n));
    return out;
}

std::string list_literal(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + quote_string(items[i]);
    return out + "]";
}

class Writer {
public:
    void line(int depth, const std::string& s) { os_ << std::string(static_cast<std::size_t>(depth) * 4, ' ') << s << '\n'; }
    void blank() { os_ << '\n'; }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

// Locate `var` from description `desc`, per style.
void locate(Writer& w, int d, PlanStyle style, const std::string& var, const std::string& desc,
            const std::string& types) {
    const std::string visual = var + " = find(Instruction(text=" + desc + ", length=150))";
    const std::string dom = var + " = find_element_by_text(description=" + desc + ", element_types=" + types + ")";
    switch (style) {
        case PlanStyle::VisualFirst:
        case PlanStyle::NoCookies:
            w.line(d, visual);
            w.line(d, "if " + var + ".start is None:");
            w.line(d + 1, dom);
            break;
        case PlanStyle::DomFirst:
            w.line(d, dom);
            w.line(d, "if " + var + ".start is None:");
            w.line(d + 1, visual);
            break;
        case PlanStyle::VisualOnly: w.line(d, visual); break;
        case PlanStyle::DomOnly: w.line(d, dom); break;
    }
}

void cookie_block(Writer& w, int n, PlanStyle style, int phrasing) {
    const std::string k = std::to_string(n);
    w.line(0, "# Cookie or consent popups");
    w.line(0, "view" + k + " = summarize_screenshot_content(Instruction(text=\"Describe the page and any popups or banners on it.\", length=1200), length=1200)");
    w.line(0, "cookie" + k + " = verify_hypothesis(observation=view" + k +
                  ".text, hypothesis=\"A cookie or privacy consent popup with accept/consent buttons is visible\")");
    w.line(0, "if cookie" + k + ".status == \"OK\":");
    w.line(1, "cookie" + k + "_done = False");
    w.line(1, "for cdesc" + k + " in " + list_literal(rotate(cookie_descriptions(), phrasing)) + ":");
    w.line(2, "if not cookie" + k + "_done:");
    // Consent controls are grounded the same way as every other element,
    // except that DOM-leaning plans never fall back to the screenshot here.
    PlanStyle cs = style;
    std::string types = "[\"push-button\", \"button\", \"link\"]";
    if (style == PlanStyle::DomFirst || style == PlanStyle::DomOnly) {
        cs = PlanStyle::DomOnly;
        types = "[\"push-button\", \"button\"]";
    }
    locate(w, 3, cs, "ctry" + k, "cdesc" + k, types);
    w.line(3, "if ctry" + k + ".start is not None:");
    w.line(4, "cclick" + k + " = left_single(ctry" + k + ".start, \"Accept cookies/consent\")");
    w.line(4, "cookie" + k + "_done = True");
    w.line(4, "wait()");
    w.blank();
}

void find_and_click(Writer& w, int n, const RecipeStep& s, PlanStyle style, int phrasing) {
    const std::string k = std::to_string(n);
    const std::string types = list_literal(s.types.empty() ? std::vector<std::string>{"link", "push-button", "button"} : s.types);
    w.line(0, "step" + k + "_done = False");
    w.line(0, "for desc" + k + " in " + list_literal(rotate(s.targets, phrasing)) + ":");
    w.line(1, "if not step" + k + "_done:");
    locate(w, 2, style, "res" + k, "desc" + k, types);
    w.line(2, "if res" + k + ".start is not None:");
    const std::string note = s.note.empty() ? "Open " + s.targets.front() : s.note;
    w.line(3, "act" + k + " = left_single(res" + k + ".start, " + quote_string(note) + ")");
    w.line(3, "if act" + k + ".status == \"OK\" or act" + k + ".status == \"UNKNOWN\":");
    w.line(4, "step" + k + "_done = True");
    w.line(4, "wait()");
    if (s.op == RecipeStep::Op::Type) {
        w.line(0, "if step" + k + "_done:");
        w.line(1, "typed" + k + " = type_text(text=" + quote_string(s.text) + ", instruction=" +
                      quote_string(s.note.empty() ? "Type into the field" : s.note) + ")");
        w.line(1, "wait()");
    }
    w.blank();
}

std::string keys_literal(const std::vector<std::string>& keys) {
    std::string out = "[";
    for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? ", " : "") + std::string("Key.") + keys[i];
    return out + "]";
}

}  // namespace

std::string render_recipe(const Recipe& r, PlanStyle style, int phrasing) {
    Writer w;
    w.line(0, "# " + r.task);
    w.line(0, "# Plan style: " + to_string(style));
    w.blank();
    int n = 0;
    int cookies = 0;
    for (const auto& s : r.steps) {
        switch (s.op) {
            case RecipeStep::Op::Cookies:
                if (style != PlanStyle::NoCookies) cookie_block(w, ++cookies, style, phrasing);
                break;
            case RecipeStep::Op::Type:
                if (s.targets.empty()) {
                    // Types into whatever already has focus.
                    w.line(0, "typed" + std::to_string(++n) + " = type_text(text=" + quote_string(s.text) +
                                  ", instruction=" + quote_string(s.note.empty() ? "Type the query" : s.note) + ")");
                    w.line(0, "wait()");
                    w.blank();
                    break;
                }
                find_and_click(w, ++n, s, style, phrasing);
                break;
            case RecipeStep::Op::Click: find_and_click(w, ++n, s, style, phrasing); break;
            case RecipeStep::Op::Hotkey:
                w.line(0, "hotkey(keys=" + keys_literal(s.keys) + ", instruction=" +
                              quote_string(s.note.empty() ? "Keyboard shortcut" : s.note) + ")");
                w.line(0, "wait()");
                w.blank();
                break;
            case RecipeStep::Op::Press:
                w.line(0, "press(Key." + (s.keys.empty() ? std::string("ENTER") : s.keys.front()) + ", instruction=" +
                              quote_string(s.note.empty() ? "Press a key" : s.note) + ")");
                w.line(0, "wait()");
                w.blank();
                break;
        }
    }
    w.line(0, "# Completion check");
    w.line(0, "done_check = check_done(Instruction(text=" + quote_string(r.task) + ", length=200))");
    w.line(0, "if done_check.done:");
    w.line(1, "mark_done()");
    w.line(0, "else:");
    w.line(1, "mark_fail()");
    return w.str();
}

}  // namespace cuaplan::oracles
