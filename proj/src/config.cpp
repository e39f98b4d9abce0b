#include "regrasp/config.hpp"

#include "regrasp/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace regrasp {

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            // blank or stray line; stray non-blank content is an error
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ParseError(origin, lineno, "expected 'key = value'");
            continue;
        }
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(origin, lineno, "empty key");
        cfg.set(key, value);
    }
    return cfg;
}

bool ConfigFile::has(const std::string& key) const {
    return values_.count(key) > 0;
}

void ConfigFile::set(const std::string& key, const std::string& value) {
    if (!values_.count(key)) order_.push_back(key);
    values_[key] = value;
}

std::string ConfigFile::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw InvalidInputError("missing config key '" + key + "' in " + origin_);
    return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::vector<double> ConfigFile::get_numbers(const std::string& key) const {
    std::istringstream ss(get_string(key));
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    if (!ss.eof())
        throw InvalidInputError("config key '" + key + "' has non-numeric content in " + origin_);
    return out;
}

double ConfigFile::get_double(const std::string& key) const {
    auto nums = get_numbers(key);
    if (nums.size() != 1)
        throw InvalidInputError("config key '" + key + "' must be a single number");
    return nums[0];
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int ConfigFile::get_int(const std::string& key) const {
    double v = get_double(key);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw InvalidInputError("config key '" + key + "' must be an integer");
    return i;
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = get_string(key);
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidInputError("config key '" + key + "' must be a boolean");
}

Vec3 ConfigFile::get_vec3(const std::string& key) const {
    auto nums = get_numbers(key);
    if (nums.size() != 3)
        throw InvalidInputError("config key '" + key + "' must hold 3 numbers");
    return Vec3(nums[0], nums[1], nums[2]);
}

Transform ConfigFile::get_pose(const std::string& key) const {
    auto nums = get_numbers(key);
    if (nums.size() != 12)
        throw InvalidInputError("config key '" + key + "' must hold 12 numbers (rotmat + t)");
    Mat3 r;
    r << nums[0], nums[1], nums[2], nums[3], nums[4], nums[5], nums[6], nums[7], nums[8];
    return make_transform(r, Vec3(nums[9], nums[10], nums[11]));
}

std::vector<std::string> ConfigFile::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& k : order_)
        if (k.rfind(prefix, 0) == 0) out.push_back(k);
    return out;
}

}  // namespace regrasp
