#include "regrasp/gripper.hpp"

#include "regrasp/errors.hpp"

namespace regrasp {

GripperModel GripperModel::from_config(const ConfigFile& cfg) {
    GripperModel g;
    g.max_jaw_width = cfg.get_double("max_jaw_width", g.max_jaw_width);
    g.min_jaw_width = cfg.get_double("min_jaw_width", g.min_jaw_width);
    if (cfg.has("pad_half_extents")) {
        auto v = cfg.get_numbers("pad_half_extents");
        if (v.size() != 2) throw InvalidInputError("pad_half_extents needs 2 numbers (x y)");
        g.pad_half_extents = Vec2(v[0], v[1]);
    }
    g.pad_sweep_cylinder_radius =
        cfg.get_double("pad_sweep_cylinder_radius", g.pad_sweep_cylinder_radius);
    if (cfg.has("finger_box")) g.finger_box = cfg.get_vec3("finger_box");
    if (cfg.has("palm_box")) g.palm_box = cfg.get_vec3("palm_box");
    g.palm_offset = cfg.get_double("palm_offset", g.palm_offset);
    g.friction_half_angle = cfg.get_double("friction_half_angle", g.friction_half_angle);
    g.validate();
    return g;
}

void GripperModel::validate() const {
    if (!(min_jaw_width < max_jaw_width))
        throw InvalidInputError("gripper: min_jaw_width must be below max_jaw_width");
    if (min_jaw_width < 0) throw InvalidInputError("gripper: negative min_jaw_width");
    if (pad_half_extents.minCoeff() <= 0 || finger_box.minCoeff() <= 0 ||
        palm_box.minCoeff() <= 0)
        throw InvalidInputError("gripper: box extents must be positive");
    // Level-1 conservativeness needs the sweep cylinder to enclose the pad
    // footprint at every rotation.
    if (pad_sweep_cylinder_radius + 1e-12 < pad_circumradius())
        throw InvalidInputError(
            "gripper: pad_sweep_cylinder_radius must be at least the pad footprint "
            "circumradius");
    if (palm_offset <= 0) throw InvalidInputError("gripper: palm_offset must be positive");
}

std::vector<OrientedBox> GripperModel::glyph_boxes(double jaw_width) const {
    std::vector<OrientedBox> boxes;
    const double w2 = jaw_width / 2.0;
    const double finger_cx = pad_half_extents.x() - finger_box.x();
    for (int side : {+1, -1}) {
        OrientedBox finger;
        finger.pose = translate(Vec3(finger_cx, 0, side * (w2 + finger_box.z())));
        finger.half = finger_box;
        boxes.push_back(finger);
    }
    OrientedBox palm;
    palm.pose = translate(Vec3(-palm_offset - palm_box.x(), 0, 0));
    palm.half = palm_box;
    boxes.push_back(palm);
    return boxes;
}

std::vector<OrientedBox> GripperModel::hand_boxes(const Transform& hand_pose,
                                                  double jaw_width) const {
    auto boxes = glyph_boxes(jaw_width);
    for (auto& b : boxes) b.pose = hand_pose * b.pose;
    return boxes;
}

}  // namespace regrasp
