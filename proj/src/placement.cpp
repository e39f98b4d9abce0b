#include "regrasp/placement.hpp"

#include "regrasp/errors.hpp"
#include "regrasp/geometry_util.hpp"
#include "regrasp/hull.hpp"

#include <algorithm>
#include <cmath>

namespace regrasp {

namespace {

struct FaceGroup {
    Vec3 normal;
    std::vector<int> faces;
};

std::vector<FaceGroup> group_coplanar_faces(const ConvexHull& hull, double tol) {
    std::vector<FaceGroup> groups;
    for (size_t f = 0; f < hull.faces.size(); ++f) {
        Vec3 n = hull.face_normal(static_cast<int>(f));
        bool merged = false;
        for (FaceGroup& g : groups) {
            if (angle_between(n, g.normal) <= tol) {
                g.faces.push_back(static_cast<int>(f));
                merged = true;
                break;
            }
        }
        if (!merged) groups.push_back({n, {static_cast<int>(f)}});
    }
    return groups;
}

}  // namespace

std::vector<Placement> stable_placements(const TriangleMesh& mesh, double stability_threshold) {
    ConvexHull hull = convex_hull(mesh.vertices);
    std::vector<FaceGroup> groups = group_coplanar_faces(hull, 1e-4);

    std::vector<Placement> placements;
    for (const FaceGroup& g : groups) {
        // Rotate so the support face's outward normal points straight down.
        Mat3 R0 = rotation_between(g.normal, Vec3(0, 0, -1));

        double z_plane = std::numeric_limits<double>::infinity();
        for (const Vec3& p : hull.points) z_plane = std::min(z_plane, (R0 * p).z());

        std::vector<Vec2> pts;
        for (int f : g.faces) {
            for (int k = 0; k < 3; ++k) {
                Vec3 v = R0 * hull.points[hull.faces[f][k]];
                pts.emplace_back(v.x(), v.y());
            }
        }
        std::vector<Vec2> poly = convex_hull_2d(pts);
        if (poly.size() < 3) continue;

        Vec3 com_t = R0 * mesh.com;
        double com_height = com_t.z() - z_plane;
        if (com_height <= 0.0) continue;
        double margin = point_in_convex_polygon_margin(Vec2(com_t.x(), com_t.y()), poly);
        if (margin <= 0.0) continue;  // com projection must be strictly inside

        double stability = margin / com_height;
        if (!(stability > stability_threshold)) continue;

        Vec2 centroid = polygon_centroid(poly);
        std::vector<Vec2> centered;
        centered.reserve(poly.size());
        for (const Vec2& p : poly) centered.push_back(p - centroid);
        double theta = polygon_principal_angle(centered);

        Transform pose = rot_z(-theta) * translate(Vec3(-centroid.x(), -centroid.y(), -z_plane)) *
                         Transform(R0);

        Eigen::Rotation2Dd r2(-theta);
        Placement pl;
        pl.id = static_cast<int>(placements.size());
        pl.rotmat = pose;
        pl.stability = stability;
        for (const Vec2& p : centered) pl.support_polygon.push_back(r2 * p);
        placements.push_back(std::move(pl));
    }
    return placements;
}

std::vector<FreeTabletopGrip> placement_grips(const Placement& placement,
                                              const std::vector<GraspConfig>& free_grasps,
                                              const GripperModel& gripper, double table_z) {
    std::vector<FreeTabletopGrip> grips;
    for (const GraspConfig& g : free_grasps) {
        Transform pose = placement.rotmat * g.hand_pose;
        bool below = false;
        for (const OrientedBox& b : gripper.hand_boxes(pose, g.jaw_width)) {
            for (const Vec3& c : b.corners()) {
                if (c.z() < table_z - 1e-12) {
                    below = true;
                    break;
                }
            }
            if (below) break;
        }
        if (below) continue;
        FreeTabletopGrip grip;
        grip.id = static_cast<int>(grips.size());
        grip.placement_id = placement.id;
        grip.freeairgrip_id = g.id;
        grip.hand_pose = pose;
        grip.jaw_width = g.jaw_width;
        grips.push_back(grip);
    }
    return grips;
}

TabletopData tabletop_discretize(const std::vector<Placement>& placements,
                                 const std::vector<std::vector<FreeTabletopGrip>>& grips_per_placement,
                                 const std::vector<Vec2>& grid, const std::vector<double>& angles) {
    if (grid.empty() || angles.empty())
        throw InvalidInputError("tabletop_discretize: grid and angles must be non-empty");
    if (grips_per_placement.size() != placements.size())
        throw InvalidInputError("tabletop_discretize: grips_per_placement size mismatch");

    TabletopData data;
    for (size_t pi = 0; pi < placements.size(); ++pi) {
        const Placement& pl = placements[pi];
        for (size_t gi = 0; gi < grid.size(); ++gi) {
            for (size_t ai = 0; ai < angles.size(); ++ai) {
                Transform delta =
                    translate(Vec3(grid[gi].x(), grid[gi].y(), 0.0)) * rot_z(angles[ai]);
                TabletopPlacement tp;
                tp.id = static_cast<int>(data.placements.size());
                tp.placement_id = pl.id;
                tp.position = grid[gi];
                tp.angle_id = static_cast<int>(ai);
                tp.world_pose = delta * pl.rotmat;
                data.placements.push_back(tp);

                for (const FreeTabletopGrip& g : grips_per_placement[pi]) {
                    TabletopGrip tg;
                    tg.id = static_cast<int>(data.grips.size());
                    tg.tabletopplacement_id = tp.id;
                    tg.freeairgrip_id = g.freeairgrip_id;
                    tg.hand_pose = delta * g.hand_pose;
                    tg.jaw_width = g.jaw_width;
                    data.grips.push_back(tg);
                }
            }
        }
    }
    return data;
}

}  // namespace regrasp
