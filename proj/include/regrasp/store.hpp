#pragma once

#include "regrasp/graspplan.hpp"
#include "regrasp/kinematics.hpp"
#include "regrasp/placement.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace regrasp {

// Row-id mapping returned by save_pipeline (in-memory id -> database id).
struct IdMap {
    int64_t object_id = -1;
    std::map<int, int64_t> freeairgrip;
    std::map<int, int64_t> freetabletopplacement;
    std::map<int, int64_t> angle;  // angle index -> idangle
    std::map<int, int64_t> tabletopplacements;
    std::map<int, int64_t> tabletopgrips;
};

struct RobotIk {
    std::string robot_name;
    std::vector<IkFeasibility> rows;  // tabletopgrip_id = in-memory grip id
};

// Rows as the graph builder and query layer consume them.
struct GripNodeRow {
    int64_t id = -1;
    int64_t idtabletopplacements = -1;
    int64_t idfreeairgrip = -1;
    Transform hand_pose = Transform::Identity();
    double jaw_width = 0.0;
};

struct TabletopPlacementRow {
    int64_t id = -1;
    int64_t idfreetabletopplacement = -1;
    int64_t idangle = -1;
    Vec2 position = Vec2::Zero();
    Transform world_pose = Transform::Identity();
};

struct FreeGraspRow {
    int64_t id = -1;
    Vec3 contactpoint0, contactpoint1, contactnormal0, contactnormal1;
    Transform hand_pose = Transform::Identity();  // object frame
    double jaw_width = 0.0;
};

struct FreePlacementRow {
    int64_t id = -1;
    Transform rotmat = Transform::Identity();
};

struct FreeTabletopGripRow {
    int64_t id = -1;
    int64_t idfreeairgrip = -1;
    int64_t idfreetabletopplacement = -1;
    Transform hand_pose = Transform::Identity();  // placement frame
    double jaw_width = 0.0;
};

// Single-file relational store holding the ten-table planning schema.
class Store {
public:
    explicit Store(const std::string& path);
    ~Store();
    Store(Store&&) noexcept;
    Store& operator=(Store&&) noexcept;
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    const std::string& path() const;

    int64_t ensure_robot(const std::string& name);
    int64_t ensure_ikret(const RetractionSpec& ret);
    std::optional<int64_t> find_object(const std::string& name) const;
    std::vector<std::pair<int64_t, std::string>> objects() const;
    std::vector<std::pair<int64_t, std::string>> robots() const;

    // Atomic replace-per-object write of a full precomputation result.
    IdMap save_pipeline(const std::string& object_name, const std::vector<GraspConfig>& grasps,
                        const std::vector<Placement>& placements,
                        const std::vector<std::vector<FreeTabletopGrip>>& grips_per_placement,
                        const std::vector<double>& angles, const TabletopData& tabletop,
                        const std::vector<RobotIk>& ik = {});

    // Exact join results; each unordered pair once, ordered by (min id, max id).
    std::vector<std::pair<int64_t, int64_t>> query_shared_grasps(int64_t object_id) const;
    std::vector<std::pair<int64_t, int64_t>> query_coplaced_grips(int64_t object_id) const;

    // Grip rows for graph building; robot_id >= 0 keeps only rows whose ik
    // record has all three feasibility flags set.
    std::vector<GripNodeRow> load_grip_nodes(int64_t object_id, int64_t robot_id = -1) const;
    std::vector<TabletopPlacementRow> load_tabletop_placements(int64_t object_id) const;
    std::vector<FreeGraspRow> load_free_grasps(int64_t object_id) const;
    std::vector<FreePlacementRow> load_free_placements(int64_t object_id) const;
    std::vector<FreeTabletopGripRow> load_free_tabletop_grips(int64_t placement_row_id) const;
    std::vector<double> load_angles() const;

    std::map<std::string, int64_t> table_counts() const;
    // Deterministic CSV (header + rows in primary-key order).
    std::string export_csv(const std::string& table) const;

    static const std::vector<std::string>& table_names();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace regrasp
