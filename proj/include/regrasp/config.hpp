#pragma once

#include "regrasp/transform.hpp"

#include <map>
#include <string>
#include <vector>

namespace regrasp {

// Declarative `key = value...` text format shared by gripper, robot, and
// workspace files. Values are whitespace-separated tokens; '#' starts a
// comment; later assignments win (CLI overrides reuse this).
class ConfigFile {
public:
    ConfigFile() = default;
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& origin = "<text>");

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_numbers(const std::string& key) const;
    Vec3 get_vec3(const std::string& key) const;
    Transform get_pose(const std::string& key) const;  // 12 numbers

    // All keys with the given prefix, in file order.
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
    std::string origin_ = "<empty>";
};

}  // namespace regrasp
