#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scrmlmc/estimator.hpp"

namespace scrmlmc {

// Sectioned key-value configuration. Every key must be consumed by the run
// that uses the file; leftovers are reported as errors with line numbers.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::filesystem::path& path);
    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback);
    double get_number(const std::string& section, const std::string& key, double fallback);
    long get_integer(const std::string& section, const std::string& key, long fallback);
    std::vector<double> get_number_list(const std::string& section, const std::string& key,
                                        std::vector<double> fallback);
    std::vector<long> get_integer_list(const std::string& section, const std::string& key,
                                       std::vector<long> fallback);

    // Overwrites or inserts a value (used for CLI overrides).
    void set(const std::string& section, const std::string& key, const std::string& value);

    // Throws ConfigError listing any keys never read via the getters.
    void ensure_fully_consumed() const;

    // Serializes every key (read or not) back to config syntax.
    std::string serialize() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };
    std::string origin_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::vector<std::string> section_order_;

    const Entry* find(const std::string& section, const std::string& key) const;
    [[noreturn]] void fail(const std::string& message, int line) const;
};

}  // namespace scrmlmc
