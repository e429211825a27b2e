#include "cuaplan/runtime/value.hpp"

#include <sstream>

#include "cuaplan/util/digest.hpp"
#include "cuaplan/util/text.hpp"

namespace cuaplan::runtime {

Provenance join(const Provenance& a, const Provenance& b) {
    Provenance out = a;
    out.insert(b.begin(), b.end());
    return out;
}

const Value* Record::get(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return &values[i];
    }
    return nullptr;
}

void Record::set(const std::string& name, Value v) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            values[i] = std::move(v);
            return;
        }
    }
    names.push_back(name);
    values.push_back(std::move(v));
}

bool Record::operator==(const Record& o) const { return names == o.names && values == o.values; }

bool operator==(const Value& a, const Value& b) { return a.payload == b.payload && a.prov == b.prov; }

Value Value::none(Provenance p) { return Value{std::monostate{}, std::move(p)}; }
Value Value::boolean(bool b, Provenance p) { return Value{b, std::move(p)}; }
Value Value::number(double d, Provenance p) { return Value{d, std::move(p)}; }
Value Value::text(std::string s, Provenance p) { return Value{std::move(s), std::move(p)}; }
Value Value::coord(env::Coord c, Provenance p) { return Value{c, std::move(p)}; }
Value Value::list(List items, Provenance p) { return Value{std::move(items), std::move(p)}; }
Value Value::record(Record r, Provenance p) { return Value{std::move(r), std::move(p)}; }

std::string Value::kind_name() const {
    switch (payload.index()) {
        case 0: return "none";
        case 1: return "bool";
        case 2: return "number";
        case 3: return "text";
        case 4: return "coordinate";
        case 5: return "list";
        case 6: return "record";
    }
    return "unknown";
}

namespace {

std::string py_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\\' || c == '\'') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out + "'";
}

}  // namespace

std::string Value::render() const {
    struct R {
        std::string operator()(std::monostate) const { return "None"; }
        std::string operator()(bool b) const { return b ? "True" : "False"; }
        std::string operator()(double d) const { return text::format_number(d); }
        std::string operator()(const std::string& s) const { return py_quote(s); }
        std::string operator()(const env::Coord& c) const {
            return "(" + text::format_number(c.x) + ", " + text::format_number(c.y) + ")";
        }
        std::string operator()(const List& l) const {
            std::string out = "[";
            for (std::size_t i = 0; i < l.size(); ++i) out += (i ? ", " : "") + l[i].render();
            return out + "]";
        }
        std::string operator()(const Record& r) const {
            std::string out = "{";
            for (std::size_t i = 0; i < r.names.size(); ++i) {
                out += (i ? ", " : "") + r.names[i] + "=" + r.values[i].render();
            }
            return out + "}";
        }
    };
    return std::visit(R{}, payload);
}

nlohmann::json Value::payload_json() const {
    struct J {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        nlohmann::json operator()(bool b) const { return b; }
        nlohmann::json operator()(double d) const { return d; }
        nlohmann::json operator()(const std::string& s) const { return s; }
        nlohmann::json operator()(const env::Coord& c) const { return nlohmann::json::array({c.x, c.y}); }
        nlohmann::json operator()(const List& l) const {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& v : l) arr.push_back(v.payload_json());
            return arr;
        }
        nlohmann::json operator()(const Record& r) const {
            nlohmann::json obj = nlohmann::json::object();
            for (std::size_t i = 0; i < r.names.size(); ++i) obj[r.names[i]] = r.values[i].payload_json();
            return obj;
        }
    };
    return std::visit(J{}, payload);
}

std::string Value::payload_digest() const {
    return sha256_hex(kind_name() + ":" + payload_json().dump()).substr(0, 16);
}

std::string provenance_label(const Provenance& p) {
    if (p.empty()) return "TRUSTED";
    std::string out = "QUARANTINED(";
    bool first = true;
    for (auto id : p) {
        out += (first ? "" : ",") + std::to_string(id);
        first = false;
    }
    return out + ")";
}

}  // namespace cuaplan::runtime
