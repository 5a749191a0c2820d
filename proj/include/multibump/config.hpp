#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "multibump/common.hpp"

namespace multibump {

/// Sectioned key = value configuration. A key inside [domain] is addressed
/// as "domain.name"; keys before the first section header have no prefix.
/// '#' starts a comment, blank lines are skipped, duplicate keys are errors.
class Config {
  public:
    static Config parse_string(const std::string& text, const std::string& origin = "<config>") {
        Config c;
        c.origin_ = origin;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string body = trim(line);
            if (body.empty()) continue;
            if (body.front() == '[') {
                if (body.back() != ']')
                    throw ConfigError(c.where(lineno) + ": unterminated section header");
                section = trim(body.substr(1, body.size() - 2));
                if (!valid_name(section))
                    throw ConfigError(c.where(lineno) + ": bad section name '" + section + "'");
                continue;
            }
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw ConfigError(c.where(lineno) + ": expected key = value, got '" + body + "'");
            const std::string name = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (!valid_name(name))
                throw ConfigError(c.where(lineno) + ": bad key name '" + name + "'");
            if (value.empty())
                throw ConfigError(c.where(lineno) + ": empty value for key '" + name + "'");
            const std::string key = section.empty() ? name : section + "." + name;
            const auto [it, fresh] = c.entries_.emplace(key, Entry{value, lineno});
            if (!fresh)
                throw ConfigError(c.where(lineno) + ": duplicate key '" + key +
                                  "' (first set on line " + std::to_string(it->second.line) + ")");
        }
        return c;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config file: " + path);
        std::ostringstream text;
        text << in.rdbuf();
        return parse_string(text.str(), path);
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get_string(const std::string& key) const { return entry(key).value; }
    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? entries_.at(key).value : fallback;
    }

    double get_double(const std::string& key) const { return to_double(key, entry(key)); }
    double get_double(const std::string& key, double fallback) const {
        return has(key) ? to_double(key, entries_.at(key)) : fallback;
    }

    int get_int(const std::string& key) const { return to_int(key, entry(key)); }
    int get_int(const std::string& key, int fallback) const {
        return has(key) ? to_int(key, entries_.at(key)) : fallback;
    }

    bool get_bool(const std::string& key) const { return to_bool(key, entry(key)); }
    bool get_bool(const std::string& key, bool fallback) const {
        return has(key) ? to_bool(key, entries_.at(key)) : fallback;
    }

    /// Comma separated list of numbers.
    std::vector<double> get_list(const std::string& key) const {
        const Entry& e = entry(key);
        std::vector<double> out;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(parse_double(key, e, trim(item)));
        if (out.empty()) throw ConfigError(at(key, e) + ": empty list");
        return out;
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const auto& [k, v] : entries_) out.push_back(k);
        return out;
    }

    /// "origin:line" of a stored key, for error messages about its meaning.
    std::string where(const std::string& key) const { return at(key, entry(key)); }

  private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    static bool valid_name(const std::string& s) {
        if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_'))
            return false;
        for (char ch : s)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-')
                return false;
        return true;
    }

    const Entry& entry(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(origin_ + ": missing required key '" + key + "'");
        return it->second;
    }

    std::string where(int line) const { return origin_ + ":" + std::to_string(line); }
    std::string at(const std::string& key, const Entry& e) const {
        return where(e.line) + ": key '" + key + "'";
    }

    double to_double(const std::string& key, const Entry& e) const {
        return parse_double(key, e, e.value);
    }
    double parse_double(const std::string& key, const Entry& e, const std::string& text) const {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0')
            throw ConfigError(at(key, e) + ": expected a number, got '" + text + "'");
        return v;
    }

    int to_int(const std::string& key, const Entry& e) const {
        char* end = nullptr;
        const long v = std::strtol(e.value.c_str(), &end, 10);
        if (end == e.value.c_str() || *end != '\0')
            throw ConfigError(at(key, e) + ": expected an integer, got '" + e.value + "'");
        if (v < -2147483648L || v > 2147483647L)
            throw ConfigError(at(key, e) + ": integer out of range");
        return static_cast<int>(v);
    }

    bool to_bool(const std::string& key, const Entry& e) const {
        std::string v = e.value;
        for (char& ch : v) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
        if (v == "false" || v == "no" || v == "off" || v == "0") return false;
        throw ConfigError(at(key, e) + ": expected a boolean, got '" + e.value + "'");
    }

    std::string origin_ = "<config>";
    std::map<std::string, Entry> entries_;
};

}  // namespace multibump
