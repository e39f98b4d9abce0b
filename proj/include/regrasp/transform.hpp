#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <array>
#include <string>

namespace regrasp {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Transform = Eigen::Isometry3d;

inline Transform make_transform(const Mat3& rot, const Vec3& t) {
    Transform tf = Transform::Identity();
    tf.linear() = rot;
    tf.translation() = t;
    return tf;
}

inline Transform rot_z(double yaw) {
    return make_transform(Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix(), Vec3::Zero());
}

inline Transform translate(const Vec3& t) {
    return make_transform(Mat3::Identity(), t);
}

// Shortest rotation taking `from` onto `to`; both assumed unit length.
Mat3 rotation_between(const Vec3& from, const Vec3& to);

// Deterministic unit vector perpendicular to `axis`. Picks the world axis
// least aligned with `axis` (ties broken z, then y, then x) and projects it
// out. Used as the zero-rotation reference when sweeping grasp rotations.
Vec3 stable_perpendicular(const Vec3& axis);

// Angle between two vectors in [0, pi].
double angle_between(const Vec3& a, const Vec3& b);

// Wire format for poses: 12 decimals, row-major 3x3 rotation then the
// translation, printed with enough digits that decode(encode(T)) round-trips
// finite doubles bitwise.
std::string encode_pose(const Transform& tf);
Transform decode_pose(const std::string& text);

std::string encode_vec3(const Vec3& v);
Vec3 decode_vec3(const std::string& text);

std::string format_double(double v);  // shortest bitwise-exact decimal form

// Rotation "distance": angle of Ra^T * Rb.
double rotation_error(const Mat3& a, const Mat3& b);

}  // namespace regrasp
