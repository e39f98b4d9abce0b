#pragma once

#include "regrasp/config.hpp"
#include "regrasp/geometry_util.hpp"
#include "regrasp/transform.hpp"

#include <vector>

namespace regrasp {

// Parallel-jaw gripper. Hand frame convention: origin at the jaw center,
// x = approach direction (palm sits behind the origin at -x), z = jaw-closing
// axis. The collision model is a palm box plus two finger boxes whose inner
// faces sit at z = +/- jaw_width/2; fingertip faces lie at x =
// pad_half_extents.x so the pad footprint covers the contact point.
struct GripperModel {
    double max_jaw_width = 0.08;
    double min_jaw_width = 0.0;
    Vec2 pad_half_extents = Vec2(0.01, 0.01);
    double pad_sweep_cylinder_radius = 0.015;
    Vec3 finger_box = Vec3(0.02, 0.012, 0.008);
    Vec3 palm_box = Vec3(0.02, 0.035, 0.05);
    double palm_offset = 0.06;  // jaw center to palm front face
    double friction_half_angle = 0.2967;  // ~17 deg, mu ~ 0.3

    static GripperModel from_config(const ConfigFile& cfg);
    void validate() const;

    double pad_circumradius() const { return pad_half_extents.norm(); }

    // Palm + two fingers posed in the world given the hand pose and the
    // distance between the two inner pad faces.
    std::vector<OrientedBox> hand_boxes(const Transform& hand_pose, double jaw_width) const;

    // Glyph mesh for scene exports (same boxes).
    std::vector<OrientedBox> glyph_boxes(double jaw_width) const;
};

}  // namespace regrasp
