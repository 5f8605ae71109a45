#include "aeris/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace aeris::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("toml: line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// strip a trailing comment, respecting quoted strings
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

std::vector<std::string> split_path(const std::string& s, int line) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == '.') {
            if (cur.empty()) fail(line, "empty path segment");
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (trim(cur).empty()) fail(line, "empty path segment");
    parts.push_back(trim(cur));
    return parts;
}

std::string parse_basic_string(const std::string& s, int line) {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        char c = s[i];
        if (c == '\\') {
            if (i + 2 >= s.size()) fail(line, "dangling escape");
            char e = s[++i];
            switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: fail(line, std::string("unsupported escape \\") + e);
            }
        } else {
            out += c;
        }
    }
    return out;
}

Value parse_scalar(std::string tok, int line);

Value parse_array(const std::string& s, int line) {
    Array arr;
    std::string inner = trim(s.substr(1, s.size() - 2));
    if (inner.empty()) return Value{arr};
    std::string cur;
    bool in_string = false;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        char c = inner[i];
        if (c == '"' && (i == 0 || inner[i - 1] != '\\')) in_string = !in_string;
        if (c == ',' && !in_string) {
            arr.push_back(parse_scalar(trim(cur), line));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) arr.push_back(parse_scalar(trim(cur), line));
    return Value{arr};
}

Value parse_scalar(std::string tok, int line) {
    if (tok.empty()) fail(line, "empty value");
    if (tok.front() == '[') {
        if (tok.back() != ']') fail(line, "unterminated array");
        return parse_array(tok, line);
    }
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            fail(line, "unterminated string");
        return Value{parse_basic_string(tok, line)};
    }
    if (tok == "true") return Value{true};
    if (tok == "false") return Value{false};
    if (tok == "inf" || tok == "+inf")
        return Value{std::numeric_limits<double>::infinity()};
    if (tok == "-inf")
        return Value{-std::numeric_limits<double>::infinity()};
    if (tok == "nan") return Value{std::numeric_limits<double>::quiet_NaN()};

    std::string digits;
    for (char c : tok)
        if (c != '_') digits += c;
    const bool looks_float =
        digits.find_first_of(".eE") != std::string::npos ||
        digits == "inf" || digits == "-inf";
    if (!looks_float) {
        std::int64_t iv = 0;
        auto [p, ec] =
            std::from_chars(digits.data(), digits.data() + digits.size(), iv);
        if (ec == std::errc() && p == digits.data() + digits.size())
            return Value{iv};
    }
    try {
        std::size_t used = 0;
        const double dv = std::stod(digits, &used);
        if (used == digits.size()) return Value{dv};
    } catch (...) {
    }
    fail(line, "cannot parse value '" + tok + "'");
}

Table* descend(Table& root, const std::vector<std::string>& path, int line,
               std::size_t upto) {
    Table* t = &root;
    for (std::size_t i = 0; i < upto; ++i) {
        auto it = t->find(path[i]);
        if (it == t->end())
            it = t->emplace(path[i], Value{Table{}}).first;
        if (it->second.is_array()) {
            // descend into the latest element of an array of tables
            auto& arr = std::get<Array>(it->second.data);
            if (arr.empty() || !arr.back().is_table())
                fail(line, "'" + path[i] + "' is not a table");
            t = &std::get<Table>(arr.back().data);
        } else if (it->second.is_table()) {
            t = &std::get<Table>(it->second.data);
        } else {
            fail(line, "'" + path[i] + "' is not a table");
        }
    }
    return t;
}

} // namespace

const std::string& Value::as_string(const std::string& context) const {
    if (!is_string()) throw ConfigError(context + ": expected a string");
    return std::get<std::string>(data);
}
std::int64_t Value::as_int(const std::string& context) const {
    if (!is_int()) throw ConfigError(context + ": expected an integer");
    return std::get<std::int64_t>(data);
}
double Value::as_double(const std::string& context) const {
    if (is_int()) return static_cast<double>(std::get<std::int64_t>(data));
    if (!std::holds_alternative<double>(data))
        throw ConfigError(context + ": expected a number");
    return std::get<double>(data);
}
bool Value::as_bool(const std::string& context) const {
    if (!is_bool()) throw ConfigError(context + ": expected a boolean");
    return std::get<bool>(data);
}
const Array& Value::as_array(const std::string& context) const {
    if (!is_array()) throw ConfigError(context + ": expected an array");
    return std::get<Array>(data);
}
const Table& Value::as_table(const std::string& context) const {
    if (!is_table()) throw ConfigError(context + ": expected a table");
    return std::get<Table>(data);
}

Table parse(const std::string& text) {
    Table root;
    Table* current = &root;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;

        if (s.size() >= 4 && s.substr(0, 2) == "[[" &&
            s.substr(s.size() - 2) == "]]") {
            const auto path = split_path(trim(s.substr(2, s.size() - 4)), line);
            Table* parent = descend(root, path, line, path.size() - 1);
            auto& slot = (*parent)[path.back()];
            if (std::holds_alternative<Table>(slot.data) &&
                std::get<Table>(slot.data).empty())
                slot.data = Array{};
            if (!slot.is_array()) {
                if (std::holds_alternative<Table>(slot.data))
                    fail(line, "'" + path.back() + "' already used as a table");
                slot.data = Array{};
            }
            auto& arr = std::get<Array>(slot.data);
            arr.push_back(Value{Table{}});
            current = &std::get<Table>(arr.back().data);
        } else if (s.front() == '[' && s.back() == ']') {
            const auto path = split_path(trim(s.substr(1, s.size() - 2)), line);
            current = descend(root, path, line, path.size());
        } else {
            const auto eq = s.find('=');
            if (eq == std::string::npos) fail(line, "expected key = value");
            std::string key = trim(s.substr(0, eq));
            const bool quoted =
                key.size() >= 2 && key.front() == '"' && key.back() == '"';
            if (quoted) key = parse_basic_string(key, line);
            if (key.empty()) fail(line, "empty key");
            if (!quoted)
                for (char c : key)
                    if (!std::isalnum(static_cast<unsigned char>(c)) &&
                        c != '_' && c != '-')
                        fail(line, "invalid key '" + key + "'");
            if (current->count(key)) fail(line, "duplicate key '" + key + "'");
            (*current)[key] = parse_scalar(trim(s.substr(eq + 1)), line);
        }
    }
    return root;
}

Table parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

} // namespace aeris::toml
