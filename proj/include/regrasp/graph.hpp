#pragma once

#include "regrasp/gripper.hpp"
#include "regrasp/kinematics.hpp"
#include "regrasp/mesh.hpp"
#include "regrasp/store.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace regrasp {

enum class EdgeType { Transfer, Transit };

struct GraphWeights {
    double transfer = 1.0;
    double transit = 10.0;
    // Cliques larger than this are replaced by a star through a virtual
    // node with half-weight spokes (same shortest-path metric, O(k) edges).
    int star_threshold = 200;
};

struct GraphNode {
    int64_t grip_id = -1;               // tabletopgrips row id; temp nodes < 0
    int64_t placement_instance = -1;    // idtabletopplacements (-1 for temps)
    int64_t freeairgrip = -1;
    Transform hand_pose = Transform::Identity();  // world
    double jaw_width = 0.0;
};

struct GraphEdge {
    int a = -1, b = -1;  // node indices (virtual nodes sit past nodes.size())
    EdgeType type = EdgeType::Transfer;
    double weight = 0.0;
};

struct RegraspGraph {
    std::vector<GraphNode> nodes;            // ascending grip id
    int virtual_count = 0;                   // appended after nodes
    std::vector<GraphEdge> edges;
    GraphWeights weights;
    std::map<int64_t, Transform> placement_poses;  // instance id -> world pose
    // Transfer groups that were starred: freeairgrip -> virtual node index.
    std::map<int64_t, int> transfer_stars;
    // Roadmap node indices per freeairgrip (for pose connection).
    std::map<int64_t, std::vector<int>> nodes_by_grasp;

    int total_vertices() const { return static_cast<int>(nodes.size()) + virtual_count; }
};

// Everything connect_pose/search need beyond the store rows.
struct QueryContext {
    const TriangleMesh* mesh = nullptr;
    const GripperModel* gripper = nullptr;
    const RobotModel* robot = nullptr;
    IkParams ik;
    RetractionSpec retraction;
    bool check_ik = true;  // fixtures without a robot can switch this off
};

enum class PoseRole { Init, Goal };

// Temporary overlay produced by connect_pose; never mutates the graph.
struct PoseConnection {
    PoseRole role = PoseRole::Init;
    Transform pose = Transform::Identity();
    std::vector<GraphNode> nodes;   // grip_id = -(k+1), world poses at `pose`
    std::vector<GraphEdge> edges;   // indices in the combined vertex space
    int virtual_count = 0;
    int base_index = 0;             // first combined index of this overlay
};

RegraspGraph build_graph(const Store& store, int64_t object_id, int64_t robot_id,
                         const GraphWeights& weights = {});

// Transforms the object's free grasps by `pose`, keeps table-collision-free
// and IK-feasible ones as temporary nodes, and wires them to the roadmap by
// shared freeairgrip. Throws InfeasibleError naming the emptying stage.
// base_index places the overlay in the combined vertex space (-1 = right
// after the graph's own vertices).
PoseConnection connect_pose(const RegraspGraph& graph, const Store& store, int64_t object_id,
                            const Transform& pose, PoseRole role, const QueryContext& ctx,
                            int base_index = -1);

struct SequenceStep {
    int64_t freeairgrip = -1;
    Transform grasp_pose = Transform::Identity();  // world hand pose at pick
    double jaw_width = 0.0;
    Transform pick_pose = Transform::Identity();   // object world pose
    Transform place_pose = Transform::Identity();
};

struct ManipulationSequence {
    std::vector<SequenceStep> steps;
    int regrasp_count = 0;
    double path_weight = 0.0;
    std::vector<int64_t> node_path;  // grip ids along the searched path
};

// Uniform-cost search from the init overlay to the goal overlay, including
// direct init-goal transfer edges when both expose the same freeairgrip.
// Deterministic tie-breaking by combined vertex index (ascending grip id).
ManipulationSequence search(const RegraspGraph& graph, const PoseConnection& init,
                            const PoseConnection& goal);

std::string export_graph_dot(const RegraspGraph& graph);
std::string export_sequence_json(const ManipulationSequence& seq);

// build + connect(init) + connect(goal) + search in one call.
ManipulationSequence plan_reorientation(const Store& store, int64_t object_id, int64_t robot_id,
                                        const Transform& init_pose, const Transform& goal_pose,
                                        const QueryContext& ctx, const GraphWeights& weights = {});

}  // namespace regrasp
