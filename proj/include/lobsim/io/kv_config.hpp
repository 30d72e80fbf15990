#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lobsim::io {

/// Flat key=value configuration with dotted section prefixes
/// (flow.H_s=0.77). One pair per line, '#' starts a comment. Later
/// assignments (and --set overrides) win; unknown keys are rejected at
/// validation time against a declared schema.
class KvConfig {
public:
    KvConfig() = default;

    static KvConfig from_file(const std::string& path);
    static KvConfig from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    /// Parse "key=value" (the --set form).
    void set_pair(const std::string& pair);

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    /// Comma-separated list of doubles.
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    /// Throw config_error when a key is not in the allowed set.
    void require_known(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

} // namespace lobsim::io
