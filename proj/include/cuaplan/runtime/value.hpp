#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cuaplan/env/geometry.hpp"

namespace cuaplan::runtime {

// Ids of the tool calls a value was derived from. Empty means trusted.
using Provenance = std::set<std::uint64_t>;

Provenance join(const Provenance& a, const Provenance& b);

struct Value;

struct Record {
    std::vector<std::string> names;
    std::vector<Value> values;

    const Value* get(const std::string& name) const;
    void set(const std::string& name, Value v);
    bool operator==(const Record&) const;
};

struct Value {
    using List = std::vector<Value>;
    using Payload = std::variant<std::monostate, bool, double, std::string, env::Coord, List, Record>;

    Payload payload;
    Provenance prov;

    static Value none(Provenance p = {});
    static Value boolean(bool b, Provenance p = {});
    static Value number(double d, Provenance p = {});
    static Value text(std::string s, Provenance p = {});
    static Value coord(env::Coord c, Provenance p = {});
    static Value list(List items, Provenance p = {});
    static Value record(Record r, Provenance p = {});

    bool trusted() const { return prov.empty(); }
    bool is_none() const { return std::holds_alternative<std::monostate>(payload); }
    const bool* as_bool() const { return std::get_if<bool>(&payload); }
    const double* as_number() const { return std::get_if<double>(&payload); }
    const std::string* as_text() const { return std::get_if<std::string>(&payload); }
    const env::Coord* as_coord() const { return std::get_if<env::Coord>(&payload); }
    const List* as_list() const { return std::get_if<List>(&payload); }
    const Record* as_record() const { return std::get_if<Record>(&payload); }

    std::string kind_name() const;
    // Python-like rendering ("None", "True", "'text'", "[1, 2]").
    std::string render() const;
    // Payload only; provenance is left out.
    nlohmann::json payload_json() const;
    std::string payload_digest() const;

    // Payload equality (provenance ignored).
    bool same_payload(const Value& o) const { return payload == o.payload; }
};

// Payload equality, then provenance equality.
bool operator==(const Value& a, const Value& b);

std::string provenance_label(const Provenance& p);

}  // namespace cuaplan::runtime
