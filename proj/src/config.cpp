#include "scrmlmc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace scrmlmc {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_number(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse number '" + text + "' for " + context);
    }
}

long parse_integer(const std::string& text, const std::string& context) {
    const double v = parse_number(text, context);
    const long i = std::lround(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("config: expected an integer for " + context + ", got '" + text + "'");
    return i;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path.string());
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') cfg.fail("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) cfg.fail("empty section name", line_no);
            if (!cfg.sections_.count(section)) cfg.section_order_.push_back(section);
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) cfg.fail("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) cfg.fail("empty key", line_no);
        if (section.empty()) cfg.fail("key outside any [section]", line_no);
        if (cfg.sections_[section].count(key)) cfg.fail("duplicate key '" + key + "'", line_no);
        cfg.sections_[section][key] = Entry{value, line_no, false};
    }
    return cfg;
}

void ConfigFile::fail(const std::string& message, int line) const {
    throw ConfigError("config: " + message + " (" + origin_ + ":" + std::to_string(line) + ")");
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
    const auto sit = sections_.find(section);
    if (sit == sections_.end()) return nullptr;
    const auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    kit->second.consumed = true;
    return &kit->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto sit = sections_.find(section);
    return sit != sections_.end() && sit->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

double ConfigFile::get_number(const std::string& section, const std::string& key,
                              double fallback) {
    const Entry* e = find(section, key);
    return e ? parse_number(e->value, section + "." + key) : fallback;
}

long ConfigFile::get_integer(const std::string& section, const std::string& key, long fallback) {
    const Entry* e = find(section, key);
    return e ? parse_integer(e->value, section + "." + key) : fallback;
}

std::vector<double> ConfigFile::get_number_list(const std::string& section, const std::string& key,
                                                std::vector<double> fallback) {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::vector<double> values;
    for (const auto& item : split_list(e->value))
        values.push_back(parse_number(item, section + "." + key));
    if (values.empty()) throw ConfigError("config: empty list for " + section + "." + key);
    return values;
}

std::vector<long> ConfigFile::get_integer_list(const std::string& section, const std::string& key,
                                               std::vector<long> fallback) {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::vector<long> values;
    for (const auto& item : split_list(e->value))
        values.push_back(parse_integer(item, section + "." + key));
    if (values.empty()) throw ConfigError("config: empty list for " + section + "." + key);
    return values;
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
    if (!sections_.count(section)) section_order_.push_back(section);
    sections_[section][key] = Entry{value, 0, false};
}

void ConfigFile::ensure_fully_consumed() const {
    std::vector<std::string> leftovers;
    for (const auto& [section, keys] : sections_)
        for (const auto& [key, entry] : keys)
            if (!entry.consumed)
                leftovers.push_back(section + "." + key + " (" + origin_ + ":" +
                                    std::to_string(entry.line) + ")");
    if (!leftovers.empty()) {
        std::string message = "config: unknown key(s):";
        for (const auto& item : leftovers) message += " " + item;
        throw ConfigError(message);
    }
}

std::string ConfigFile::serialize() const {
    std::ostringstream out;
    for (const auto& section : section_order_) {
        out << "[" << section << "]\n";
        for (const auto& [key, entry] : sections_.at(section))
            out << key << " = " << entry.value << "\n";
        out << "\n";
    }
    return out.str();
}

}  // namespace scrmlmc
