#include "lobsim/io/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "lobsim/errors.hpp"

namespace lobsim::io {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

KvConfig KvConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

KvConfig KvConfig::from_string(const std::string& text) {
    KvConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               ": expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.set(key, value);
    }
    return cfg;
}

void KvConfig::set(const std::string& key, const std::string& value) { entries_[key] = value; }

void KvConfig::set_pair(const std::string& pair) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0)
        throw config_error("--set expects key=value, got '" + pair + "'");
    set(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
}

bool KvConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::optional<std::string> KvConfig::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || p != v->data() + v->size())
        throw config_error("config key " + key + ": '" + *v + "' is not a number");
    return out;
}

std::int64_t KvConfig::get_int(const std::string& key, std::int64_t fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    // tolerate scientific notation for step counts (2.4e6)
    if (v->find_first_of(".eE") != std::string::npos) {
        const double d = get_double(key, 0.0);
        const auto out = static_cast<std::int64_t>(d);
        if (static_cast<double>(out) != d)
            throw config_error("config key " + key + ": '" + *v + "' is not an integer");
        return out;
    }
    std::int64_t out = 0;
    const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || p != v->data() + v->size())
        throw config_error("config key " + key + ": '" + *v + "' is not an integer");
    return out;
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "1" || *v == "true" || *v == "yes") return true;
    if (*v == "0" || *v == "false" || *v == "no") return false;
    throw config_error("config key " + key + ": '" + *v + "' is not a boolean");
}

std::string KvConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto v = get(key);
    return v ? *v : fallback;
}

std::vector<double> KvConfig::get_double_list(const std::string& key,
                                              const std::vector<double>& fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<double> out;
    std::istringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        double d = 0.0;
        const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), d);
        if (ec != std::errc{} || p != item.data() + item.size())
            throw config_error("config key " + key + ": '" + item + "' is not a number");
        out.push_back(d);
    }
    if (out.empty()) throw config_error("config key " + key + ": empty list");
    return out;
}

void KvConfig::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : entries_) {
        (void)value;
        if (!allowed.count(key)) throw config_error("unknown config key: " + key);
    }
}

} // namespace lobsim::io
