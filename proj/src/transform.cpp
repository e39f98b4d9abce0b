#include "regrasp/transform.hpp"

#include "regrasp/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace regrasp {

Mat3 rotation_between(const Vec3& from, const Vec3& to) {
    return Eigen::Quaterniond::FromTwoVectors(from, to).toRotationMatrix();
}

Vec3 stable_perpendicular(const Vec3& axis) {
    Vec3 u = axis.normalized();
    // Candidates in preference order: z, y, x.
    const Vec3 candidates[3] = {Vec3::UnitZ(), Vec3::UnitY(), Vec3::UnitX()};
    Vec3 best = candidates[0];
    double best_dot = 2.0;
    for (const Vec3& c : candidates) {
        double d = std::abs(u.dot(c));
        if (d < best_dot - 1e-12) {
            best_dot = d;
            best = c;
        }
    }
    Vec3 perp = best - u.dot(best) * u;
    return perp.normalized();
}

double angle_between(const Vec3& a, const Vec3& b) {
    double c = a.normalized().dot(b.normalized());
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string encode_pose(const Transform& tf) {
    std::string out;
    const Mat3& r = tf.linear();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (!out.empty()) out += ' ';
            out += format_double(r(i, j));
        }
    for (int i = 0; i < 3; ++i) {
        out += ' ';
        out += format_double(tf.translation()(i));
    }
    return out;
}

static std::array<double, 12> parse_numbers12(const std::string& text) {
    std::array<double, 12> vals{};
    const char* p = text.c_str();
    for (int i = 0; i < 12; ++i) {
        char* end = nullptr;
        vals[i] = std::strtod(p, &end);
        if (end == p) throw InvalidInputError("pose text needs 12 numbers: '" + text + "'");
        p = end;
    }
    return vals;
}

Transform decode_pose(const std::string& text) {
    auto v = parse_numbers12(text);
    Mat3 r;
    r << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
    return make_transform(r, Vec3(v[9], v[10], v[11]));
}

std::string encode_vec3(const Vec3& v) {
    return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
}

Vec3 decode_vec3(const std::string& text) {
    Vec3 v;
    const char* p = text.c_str();
    for (int i = 0; i < 3; ++i) {
        char* end = nullptr;
        v(i) = std::strtod(p, &end);
        if (end == p) throw InvalidInputError("vector text needs 3 numbers: '" + text + "'");
        p = end;
    }
    return v;
}

double rotation_error(const Mat3& a, const Mat3& b) {
    Eigen::AngleAxisd aa(a.transpose() * b);
    return std::abs(aa.angle());
}

}  // namespace regrasp
