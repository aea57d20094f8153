#pragma once

// Validates a document against the subset of JSON Schema used by the
// published config schema: type, const, enum, properties, required,
// additionalProperties (false), items, minItems, maxItems, minimum,
// maximum, exclusiveMinimum. Other keywords are ignored.

#include "lz/core/error.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace lz::cli {

namespace detail {

inline bool has_type(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == std::floor(v.get<double>()));
    if (t == "number") return v.is_number();
    if (t == "null") return v.is_null();
    return false;
}

inline void fail(const std::string& where, const std::string& what) {
    throw ValidationError("config " + (where.empty() ? std::string("/") : where) + ": " + what);
}

} // namespace detail

inline void validate(const nlohmann::json& v, const nlohmann::json& schema, const std::string& where = "") {
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) ok = detail::has_type(v, t);
        else
            for (const auto& s : t) ok = ok || detail::has_type(v, s);
        if (!ok) detail::fail(where, "expected type " + t.dump());
    }
    if (schema.contains("const") && v != schema["const"]) detail::fail(where, "must equal " + schema["const"].dump());
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& e : schema["enum"]) ok = ok || v == e;
        if (!ok) detail::fail(where, "must be one of " + schema["enum"].dump());
    }
    if (v.is_number()) {
        const double x = v.get<double>();
        if (schema.contains("minimum") && x < schema["minimum"].get<double>())
            detail::fail(where, "must be >= " + schema["minimum"].dump());
        if (schema.contains("maximum") && x > schema["maximum"].get<double>())
            detail::fail(where, "must be <= " + schema["maximum"].dump());
        if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>())
            detail::fail(where, "must be > " + schema["exclusiveMinimum"].dump());
    }
    if (v.is_array()) {
        if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>())
            detail::fail(where, "needs at least " + schema["minItems"].dump() + " items");
        if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>())
            detail::fail(where, "allows at most " + schema["maxItems"].dump() + " items");
        if (schema.contains("items"))
            for (std::size_t i = 0; i < v.size(); ++i) validate(v[i], schema["items"], where + "/" + std::to_string(i));
    }
    if (v.is_object()) {
        if (schema.contains("required"))
            for (const auto& r : schema["required"])
                if (!v.contains(r.get<std::string>())) detail::fail(where, "missing required key '" + r.get<std::string>() + "'");
        const auto props = schema.value("properties", nlohmann::json::object());
        const bool closed = schema.contains("additionalProperties") && schema["additionalProperties"] == false;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (props.contains(it.key())) validate(it.value(), props[it.key()], where + "/" + it.key());
            else if (closed) detail::fail(where, "unknown key '" + it.key() + "'");
        }
    }
}

} // namespace lz::cli
