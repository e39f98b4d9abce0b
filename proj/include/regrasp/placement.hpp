#pragma once

#include "regrasp/graspplan.hpp"
#include "regrasp/mesh.hpp"

#include <vector>

namespace regrasp {

// Stable rest pose on the table plane, canonicalized: support plane at z=0,
// support-polygon centroid at xy=(0,0), first principal axis along +x.
struct Placement {
    int id = -1;
    Transform rotmat = Transform::Identity();  // object frame -> canonical table frame
    std::vector<Vec2> support_polygon;         // canonical frame, CCW
    double stability = 0.0;
};

// Free grasp carried onto one placement (canonical frame).
struct FreeTabletopGrip {
    int id = -1;
    int placement_id = -1;
    int freeairgrip_id = -1;
    Transform hand_pose = Transform::Identity();
    double jaw_width = 0.0;
};

struct TabletopPlacement {
    int id = -1;
    int placement_id = -1;
    Vec2 position = Vec2::Zero();
    int angle_id = -1;
    Transform world_pose = Transform::Identity();
};

struct TabletopGrip {
    int id = -1;
    int tabletopplacement_id = -1;
    int freeairgrip_id = -1;
    Transform hand_pose = Transform::Identity();  // world frame
    double jaw_width = 0.0;
};

// One candidate per merged convex-hull face (normals within 1e-4 rad join);
// kept when the com projects strictly inside the support polygon and
// stability = margin / com_height exceeds the threshold.
std::vector<Placement> stable_placements(const TriangleMesh& mesh,
                                         double stability_threshold = 0.15);

// Transfers free grasps into the placement frame, dropping any whose hand
// model dips below the table plane z = table_z.
std::vector<FreeTabletopGrip> placement_grips(const Placement& placement,
                                              const std::vector<GraspConfig>& free_grasps,
                                              const GripperModel& gripper, double table_z = 0.0);

struct TabletopData {
    std::vector<TabletopPlacement> placements;
    std::vector<TabletopGrip> grips;
};

// Cartesian product placements x grid x angles; grips follow their instance
// without re-checking the table (translation and yaw preserve clearance).
TabletopData tabletop_discretize(const std::vector<Placement>& placements,
                                 const std::vector<std::vector<FreeTabletopGrip>>& grips_per_placement,
                                 const std::vector<Vec2>& grid, const std::vector<double>& angles);

}  // namespace regrasp
