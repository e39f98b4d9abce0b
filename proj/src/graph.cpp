#include "regrasp/graph.hpp"

#include "regrasp/errors.hpp"
#include "regrasp/geometry_util.hpp"

#include "json.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace regrasp {

namespace {

// Emit either a clique or, past the threshold, a half-weight star through a
// fresh virtual vertex. Returns the virtual index or -1.
int emit_group(const std::vector<int>& members, EdgeType type, double weight, int threshold,
               int& next_vertex, std::vector<GraphEdge>& edges,
               const std::vector<const GraphNode*>* guard_distinct_placement = nullptr) {
    if (members.size() < 2) return -1;
    if (static_cast<int>(members.size()) <= threshold) {
        for (size_t i = 0; i < members.size(); ++i) {
            for (size_t j = i + 1; j < members.size(); ++j) {
                if (guard_distinct_placement) {
                    const GraphNode* a = (*guard_distinct_placement)[i];
                    const GraphNode* b = (*guard_distinct_placement)[j];
                    if (a->placement_instance == b->placement_instance) continue;
                }
                edges.push_back({members[i], members[j], type, weight});
            }
        }
        return -1;
    }
    int v = next_vertex++;
    for (int m : members) edges.push_back({m, v, type, 0.5 * weight});
    return v;
}

}  // namespace

RegraspGraph build_graph(const Store& store, int64_t object_id, int64_t robot_id,
                         const GraphWeights& weights) {
    RegraspGraph graph;
    graph.weights = weights;

    std::vector<GripNodeRow> rows = store.load_grip_nodes(object_id, robot_id);
    graph.nodes.reserve(rows.size());
    for (const GripNodeRow& r : rows) {
        GraphNode n;
        n.grip_id = r.id;
        n.placement_instance = r.idtabletopplacements;
        n.freeairgrip = r.idfreeairgrip;
        n.hand_pose = r.hand_pose;
        n.jaw_width = r.jaw_width;
        graph.nodes.push_back(n);
    }
    for (const TabletopPlacementRow& tp : store.load_tabletop_placements(object_id))
        graph.placement_poses[tp.id] = tp.world_pose;

    std::map<int64_t, std::vector<int>> by_placement;
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        by_placement[graph.nodes[i].placement_instance].push_back(static_cast<int>(i));
        graph.nodes_by_grasp[graph.nodes[i].freeairgrip].push_back(static_cast<int>(i));
    }

    int next_vertex = static_cast<int>(graph.nodes.size());
    for (const auto& [instance, members] : by_placement)
        emit_group(members, EdgeType::Transit, weights.transit, weights.star_threshold,
                   next_vertex, graph.edges);
    for (const auto& [grasp, members] : graph.nodes_by_grasp) {
        std::vector<const GraphNode*> ptrs;
        for (int m : members) ptrs.push_back(&graph.nodes[m]);
        int v = emit_group(members, EdgeType::Transfer, weights.transfer, weights.star_threshold,
                           next_vertex, graph.edges, &ptrs);
        if (v >= 0) graph.transfer_stars[grasp] = v;
    }
    graph.virtual_count = next_vertex - static_cast<int>(graph.nodes.size());
    return graph;
}

PoseConnection connect_pose(const RegraspGraph& graph, const Store& store, int64_t object_id,
                            const Transform& pose, PoseRole role, const QueryContext& ctx,
                            int base_index) {
    if (!ctx.mesh || !ctx.gripper)
        throw InvalidInputError("connect_pose: query context needs mesh and gripper");
    if (ctx.check_ik && !ctx.robot)
        throw InvalidInputError("connect_pose: query context needs a robot for IK checks");

    double min_z = std::numeric_limits<double>::infinity();
    for (const Vec3& v : ctx.mesh->vertices) min_z = std::min(min_z, (pose * v).z());
    if (std::abs(min_z) > 2e-3)
        throw InvalidInputError("pose does not rest on the table plane (lowest vertex at z = " +
                                std::to_string(min_z) + ")");

    PoseConnection conn;
    conn.role = role;
    conn.pose = pose;
    conn.base_index = base_index >= 0 ? base_index : graph.total_vertices();

    std::vector<FreeGraspRow> grasps = store.load_free_grasps(object_id);
    if (grasps.empty()) throw InfeasibleError("collision", "object has no free grasps stored");

    std::vector<FreeGraspRow> clear;
    for (const FreeGraspRow& g : grasps) {
        Transform world = pose * g.hand_pose;
        bool below = false;
        for (const OrientedBox& b : ctx.gripper->hand_boxes(world, g.jaw_width)) {
            for (const Vec3& c : b.corners()) {
                if (c.z() < -1e-12) {
                    below = true;
                    break;
                }
            }
            if (below) break;
        }
        if (!below) clear.push_back(g);
    }
    if (clear.empty())
        throw InfeasibleError("collision",
                              std::string(role == PoseRole::Init ? "init" : "goal") +
                                  " pose: every grasp collides with the table");

    for (const FreeGraspRow& g : clear) {
        Transform world = pose * g.hand_pose;
        if (ctx.check_ik) {
            IkFeasibility feas = grip_feasibility(*ctx.robot, world, ctx.retraction, ctx.ik);
            if (!(feas.feasibility && feas.feasibility_handx && feas.feasibility_handxworldz))
                continue;
        }
        GraphNode n;
        n.grip_id = -static_cast<int64_t>(conn.nodes.size()) - 1;
        n.placement_instance = -1;
        n.freeairgrip = g.id;
        n.hand_pose = world;
        n.jaw_width = g.jaw_width;
        conn.nodes.push_back(n);
    }
    if (conn.nodes.empty())
        throw InfeasibleError("ik", std::string(role == PoseRole::Init ? "init" : "goal") +
                                        " pose: no table-clear grasp is IK-feasible");

    // Transit clique among the temporary grips (all at this physical pose).
    std::vector<int> members;
    for (size_t i = 0; i < conn.nodes.size(); ++i)
        members.push_back(conn.base_index + static_cast<int>(i));
    int next_vertex = conn.base_index + static_cast<int>(conn.nodes.size());
    emit_group(members, EdgeType::Transit, graph.weights.transit, graph.weights.star_threshold,
               next_vertex, conn.edges);
    conn.virtual_count = next_vertex - conn.base_index - static_cast<int>(conn.nodes.size());

    // Transfer edges into the roadmap by shared freeairgrip.
    for (size_t i = 0; i < conn.nodes.size(); ++i) {
        int self = conn.base_index + static_cast<int>(i);
        int64_t f = conn.nodes[i].freeairgrip;
        auto star = graph.transfer_stars.find(f);
        if (star != graph.transfer_stars.end()) {
            conn.edges.push_back({self, star->second, EdgeType::Transfer,
                                  0.5 * graph.weights.transfer});
            continue;
        }
        auto group = graph.nodes_by_grasp.find(f);
        if (group == graph.nodes_by_grasp.end()) continue;
        for (int idx : group->second)
            conn.edges.push_back({self, idx, EdgeType::Transfer, graph.weights.transfer});
    }
    return conn;
}

namespace {

struct CombinedView {
    const RegraspGraph& graph;
    const PoseConnection& init;
    const PoseConnection& goal;
    int total = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;

    CombinedView(const RegraspGraph& g, const PoseConnection& i, const PoseConnection& go)
        : graph(g), init(i), goal(go) {
        total = go.base_index + static_cast<int>(go.nodes.size()) + go.virtual_count;
        adj.resize(total);
        auto add = [this](const GraphEdge& e) {
            adj[e.a].push_back({e.b, e.weight});
            adj[e.b].push_back({e.a, e.weight});
        };
        for (const GraphEdge& e : graph.edges) add(e);
        for (const GraphEdge& e : init.edges) add(e);
        for (const GraphEdge& e : goal.edges) add(e);
        // Direct carries: init grasp and goal grasp sharing a freeairgrip.
        for (size_t a = 0; a < init.nodes.size(); ++a)
            for (size_t b = 0; b < goal.nodes.size(); ++b)
                if (init.nodes[a].freeairgrip == goal.nodes[b].freeairgrip)
                    add({init.base_index + static_cast<int>(a),
                         goal.base_index + static_cast<int>(b), EdgeType::Transfer,
                         graph.weights.transfer});
    }

    // Real node lookup; null for virtual vertices.
    const GraphNode* node(int idx) const {
        int n_graph = static_cast<int>(graph.nodes.size());
        if (idx < n_graph) return &graph.nodes[idx];
        if (idx < graph.total_vertices()) return nullptr;
        int i = idx - init.base_index;
        if (i >= 0 && i < static_cast<int>(init.nodes.size())) return &init.nodes[i];
        if (idx < init.base_index + static_cast<int>(init.nodes.size()) + init.virtual_count)
            return nullptr;
        int g = idx - goal.base_index;
        if (g >= 0 && g < static_cast<int>(goal.nodes.size())) return &goal.nodes[g];
        return nullptr;
    }

    // Location key: equal => transit relation (same physical placement).
    int64_t location(int idx) const {
        const GraphNode* n = node(idx);
        if (!n) return -100;
        if (n->placement_instance >= 0) return n->placement_instance;
        int i = idx - init.base_index;
        if (i >= 0 && i < static_cast<int>(init.nodes.size())) return -2;
        return -3;
    }

    Transform object_pose(int idx) const {
        const GraphNode* n = node(idx);
        if (!n) throw Error("object_pose on a virtual vertex");
        if (n->placement_instance >= 0) return graph.placement_poses.at(n->placement_instance);
        int i = idx - init.base_index;
        if (i >= 0 && i < static_cast<int>(init.nodes.size())) return init.pose;
        return goal.pose;
    }

    int settled_count(const std::vector<int>& sources) const {
        std::vector<char> seen(total, 0);
        std::vector<int> stack = sources;
        for (int s : sources) seen[s] = 1;
        int count = 0;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            ++count;
            for (const auto& [v, w] : adj[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        return count;
    }
};

}  // namespace

ManipulationSequence search(const RegraspGraph& graph, const PoseConnection& init,
                            const PoseConnection& goal) {
    if (init.nodes.empty() || goal.nodes.empty())
        throw InvalidInputError("search: both pose connections must hold nodes");
    if (goal.base_index < init.base_index + static_cast<int>(init.nodes.size()) + init.virtual_count)
        throw InvalidInputError("search: overlapping overlay vertex ranges");

    CombinedView view(graph, init, goal);

    std::vector<double> dist(view.total, std::numeric_limits<double>::infinity());
    std::vector<int> parent(view.total, -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;

    std::vector<int> sources, targets;
    for (size_t i = 0; i < init.nodes.size(); ++i)
        sources.push_back(init.base_index + static_cast<int>(i));
    for (size_t i = 0; i < goal.nodes.size(); ++i)
        targets.push_back(goal.base_index + static_cast<int>(i));
    std::vector<char> is_target(view.total, 0);
    for (int t : targets) is_target[t] = 1;

    for (int s : sources) {
        dist[s] = 0.0;
        queue.push({0.0, s});
    }

    int reached = -1;
    std::vector<char> done(view.total, 0);
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (is_target[u]) {
            reached = u;
            break;
        }
        for (const auto& [v, w] : view.adj[u]) {
            if (done[v]) continue;
            double nd = d + w;
            // Strict improvement or equal-cost lexicographic parent keeps the
            // chosen tree deterministic regardless of queue internals.
            if (nd < dist[v] ||
                (nd == dist[v] && parent[v] >= 0 && u < parent[v])) {
                dist[v] = nd;
                parent[v] = u;
                queue.push({nd, v});
            }
        }
    }

    if (reached < 0) {
        int init_side = view.settled_count(sources);
        int goal_side = view.settled_count(targets);
        throw InfeasibleError("disconnected",
                              "no path between init and goal grasps (init component: " +
                                  std::to_string(init_side) + " vertices, goal component: " +
                                  std::to_string(goal_side) + " vertices)");
    }

    std::vector<int> raw_path;
    for (int u = reached; u >= 0; u = parent[u]) raw_path.push_back(u);
    std::reverse(raw_path.begin(), raw_path.end());

    // Drop virtual star vertices; the hop relation survives on real nodes.
    std::vector<int> path;
    for (int idx : raw_path)
        if (view.node(idx)) path.push_back(idx);

    ManipulationSequence seq;
    seq.path_weight = dist[reached];
    for (int idx : path) seq.node_path.push_back(view.node(idx)->grip_id);

    int transit_hops = 0;
    size_t i = 0;
    while (i + 1 < path.size()) {
        if (view.location(path[i]) == view.location(path[i + 1])) {  // transit hop
            ++transit_hops;
            ++i;
            continue;
        }
        // Maximal transfer run: consecutive hops necessarily share the grasp.
        size_t j = i;
        while (j + 1 < path.size() && view.location(path[j]) != view.location(path[j + 1]) &&
               view.node(path[j])->freeairgrip == view.node(path[j + 1])->freeairgrip)
            ++j;
        SequenceStep step;
        step.freeairgrip = view.node(path[i])->freeairgrip;
        step.grasp_pose = view.node(path[i])->hand_pose;
        step.jaw_width = view.node(path[i])->jaw_width;
        step.pick_pose = view.object_pose(path[i]);
        step.place_pose = view.object_pose(path[j]);
        seq.steps.push_back(step);
        i = j;
    }
    seq.regrasp_count = transit_hops;
    return seq;
}

std::string export_graph_dot(const RegraspGraph& graph) {
    std::ostringstream out;
    out << "graph regrasp {\n";
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        const GraphNode& n = graph.nodes[i];
        out << "  n" << i << " [grip=" << n.grip_id << ", placement=" << n.placement_instance
            << ", grasp=" << n.freeairgrip << "];\n";
    }
    for (int v = 0; v < graph.virtual_count; ++v)
        out << "  v" << v << " [virtual=true];\n";
    auto name = [&](int idx) {
        std::ostringstream s;
        if (idx < static_cast<int>(graph.nodes.size()))
            s << "n" << idx;
        else
            s << "v" << (idx - static_cast<int>(graph.nodes.size()));
        return s.str();
    };
    for (const GraphEdge& e : graph.edges) {
        out << "  " << name(e.a) << " -- " << name(e.b) << " [type="
            << (e.type == EdgeType::Transfer ? "transfer" : "transit") << ", weight=" << e.weight
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

namespace {

nlohmann::json pose_json(const Transform& tf) {
    nlohmann::json arr = nlohmann::json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) arr.push_back(tf.linear()(r, c));
    for (int r = 0; r < 3; ++r) arr.push_back(tf.translation()(r));
    return arr;
}

}  // namespace

std::string export_sequence_json(const ManipulationSequence& seq) {
    nlohmann::json doc;
    doc["regrasp_count"] = seq.regrasp_count;
    doc["path_weight"] = seq.path_weight;
    doc["node_path"] = seq.node_path;
    doc["steps"] = nlohmann::json::array();
    for (const SequenceStep& s : seq.steps) {
        nlohmann::json step;
        step["freeairgrip"] = s.freeairgrip;
        step["grasp_pose"] = pose_json(s.grasp_pose);
        step["jaw_width"] = s.jaw_width;
        step["pick_pose"] = pose_json(s.pick_pose);
        step["place_pose"] = pose_json(s.place_pose);
        doc["steps"].push_back(step);
    }
    return doc.dump(2) + "\n";
}

ManipulationSequence plan_reorientation(const Store& store, int64_t object_id, int64_t robot_id,
                                        const Transform& init_pose, const Transform& goal_pose,
                                        const QueryContext& ctx, const GraphWeights& weights) {
    RegraspGraph graph = build_graph(store, object_id, robot_id, weights);
    PoseConnection init = connect_pose(graph, store, object_id, init_pose, PoseRole::Init, ctx);
    PoseConnection goal = connect_pose(graph, store, object_id, goal_pose, PoseRole::Goal, ctx,
                                       init.base_index + static_cast<int>(init.nodes.size()) +
                                           init.virtual_count);
    return search(graph, init, goal);
}

}  // namespace regrasp
