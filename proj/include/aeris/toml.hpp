#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "aeris/types.hpp"

namespace aeris::toml {

// Minimal TOML subset: tables, arrays of tables, basic key/value pairs with
// strings, integers, floats (inf included), booleans and single-line flat
// arrays. Enough for the shipped presets; parse errors carry line numbers.

struct Value;
using Table = std::map<std::string, Value>;
using Array = std::vector<Value>;

struct Value {
    std::variant<std::string, std::int64_t, double, bool, Array, Table> data;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_number() const { return is_int() || std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
    bool is_table() const { return std::holds_alternative<Table>(data); }

    // accessors throw ConfigError mentioning `context` on type mismatch
    const std::string& as_string(const std::string& context) const;
    std::int64_t as_int(const std::string& context) const;
    double as_double(const std::string& context) const;  // promotes ints
    bool as_bool(const std::string& context) const;
    const Array& as_array(const std::string& context) const;
    const Table& as_table(const std::string& context) const;
};

Table parse(const std::string& text);       // ConfigError on syntax errors
Table parse_file(const std::string& path);  // IoError if unreadable

} // namespace aeris::toml
