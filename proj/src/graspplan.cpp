#include "regrasp/graspplan.hpp"

#include "regrasp/errors.hpp"
#include "regrasp/geometry_util.hpp"
#include "regrasp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace regrasp {

double GraspPlanParams::resolved_d_min(const GripperModel& g) const {
    return d_min > 0.0 ? d_min : g.pad_circumradius();
}

double GraspPlanParams::resolved_d_max(const GripperModel& g) const {
    return d_max > 0.0 ? d_max : g.palm_offset;
}

double GraspPlanParams::resolved_merge_radius(const GripperModel& g) const {
    return merge_radius > 0.0 ? merge_radius : 0.5 * g.pad_circumradius();
}

double GraspPlanParams::resolved_max_lever(const TriangleMesh& mesh) const {
    return max_lever > 0.0 ? max_lever : 0.6 * mesh.bounding_radius();
}

std::vector<SamplePoint> filter_samples(const TriangleMesh& mesh, const Facet& facet,
                                        const std::vector<SamplePoint>& samples, double d_min,
                                        double d_max, double merge_radius) {
    std::vector<SamplePoint> kept;
    for (const SamplePoint& s : samples) {
        double d = distance_to_facet_boundary(mesh, facet, s.position);
        if (d < d_min || d > d_max) continue;
        bool merged = false;
        for (const SamplePoint& k : kept) {
            if ((k.position - s.position).norm() < merge_radius) {
                merged = true;
                break;
            }
        }
        if (!merged) kept.push_back(s);
    }
    return kept;
}

namespace {

// Symmetric key for contact-pair dedup: quantized endpoint positions,
// lexicographically ordered so (p0,p1) and (p1,p0) collapse.
using PairKey = std::array<int64_t, 6>;

PairKey make_pair_key(const Vec3& a, const Vec3& b, double quantum) {
    auto q = [quantum](const Vec3& p) {
        return std::array<int64_t, 3>{static_cast<int64_t>(std::llround(p.x() / quantum)),
                                      static_cast<int64_t>(std::llround(p.y() / quantum)),
                                      static_cast<int64_t>(std::llround(p.z() / quantum))};
    };
    auto qa = q(a), qb = q(b);
    if (qb < qa) std::swap(qa, qb);
    return {qa[0], qa[1], qa[2], qb[0], qb[1], qb[2]};
}

}  // namespace

std::vector<ContactPair> find_contact_pairs(const TriangleMesh& mesh,
                                            const std::vector<Facet>& facets,
                                            const std::vector<std::vector<SamplePoint>>& facet_samples,
                                            const GripperModel& gripper,
                                            double antipodal_tolerance) {
    if (facet_samples.size() != facets.size())
        throw InvalidInputError("find_contact_pairs: facet_samples size mismatch");

    // Triangle -> facets that contain it, for attributing ray hits.
    std::vector<std::vector<int>> tri_facets(mesh.triangles.size());
    for (size_t f = 0; f < facets.size(); ++f)
        for (int t : facets[f].triangle_ids) tri_facets[t].push_back(static_cast<int>(f));

    std::vector<ContactPair> pairs;
    std::set<PairKey> seen;
    const double quantum = 1e-6;
    const double t_min = 1e-7;

    for (size_t fa = 0; fa < facets.size(); ++fa) {
        for (const SamplePoint& s : facet_samples[fa]) {
            Vec3 dir = -s.normal;
            RayHit hit = raycast(mesh, s.position, dir, t_min);
            if (!hit.hit) continue;
            if (hit.t < gripper.min_jaw_width || hit.t > gripper.max_jaw_width) continue;
            // The opposing facet must oppose the source normal; checking the
            // hit triangle's own normal covers over-segmented membership too.
            const Vec3& hn = mesh.face_normals[hit.triangle];
            if (angle_between(s.normal, -hn) > antipodal_tolerance) continue;
            if (tri_facets[hit.triangle].empty()) continue;
            int fb = tri_facets[hit.triangle].front();

            ContactPair pair;
            pair.p0 = s.position;
            pair.p1 = s.position + hit.t * dir;
            pair.n0 = s.normal;
            pair.n1 = hn;
            pair.facet0 = static_cast<int>(fa);
            pair.facet1 = fb;
            pair.width = hit.t;
            pair.center = 0.5 * (pair.p0 + pair.p1);

            PairKey key = make_pair_key(pair.p0, pair.p1, quantum);
            if (seen.insert(key).second) pairs.push_back(pair);
        }
    }
    return pairs;
}

std::vector<ContactPair> gravity_filter(const std::vector<ContactPair>& pairs, const Vec3& com,
                                        double max_lever) {
    std::vector<ContactPair> kept;
    for (const ContactPair& p : pairs)
        if ((com - p.center).norm() <= max_lever) kept.push_back(p);
    return kept;
}

bool collision_level1(const ContactPair& pair, const GripperModel& gripper,
                      const TriangleMesh& mesh, double exclusion_radius) {
    Vec3 axis = (pair.p1 - pair.p0).normalized();
    double sweep = 0.5 * gripper.max_jaw_width;
    // Cylinders point outward from each contact, i.e. the volume the fingers
    // sweep through while closing from the fully open width.
    Cylinder c0{pair.p0, -axis, sweep, gripper.pad_sweep_cylinder_radius};
    Cylinder c1{pair.p1, axis, sweep, gripper.pad_sweep_cylinder_radius};

    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        Vec3 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
        // Triangles at the touched patch around each cylinder's own contact
        // are the intended contact surface, not a collision.
        if (point_triangle_distance(pair.p0, a, b, c) > exclusion_radius &&
            cylinder_triangle_intersect(c0, a, b, c))
            return true;
        if (point_triangle_distance(pair.p1, a, b, c) > exclusion_radius &&
            cylinder_triangle_intersect(c1, a, b, c))
            return true;
    }
    return false;
}

Transform grasp_hand_pose(const ContactPair& pair, int rotation_index, int rotation_samples) {
    Vec3 z = (pair.p1 - pair.p0).normalized();
    Vec3 x0 = stable_perpendicular(z);
    double angle = 2.0 * M_PI * rotation_index / rotation_samples;
    Vec3 x = Eigen::AngleAxisd(angle, z) * x0;
    Vec3 y = z.cross(x);
    Mat3 rot;
    rot.col(0) = x;
    rot.col(1) = y;
    rot.col(2) = z;
    return make_transform(rot, pair.center);
}

std::vector<GraspConfig> collision_level2(const ContactPair& pair, int rotation_samples,
                                          const GripperModel& gripper, const TriangleMesh& mesh,
                                          double approach_clearance) {
    if (rotation_samples < 1) throw InvalidInputError("rotation_samples must be >= 1");
    std::vector<GraspConfig> out;
    double width = std::min(pair.width + approach_clearance, gripper.max_jaw_width);
    for (int r = 0; r < rotation_samples; ++r) {
        Transform pose = grasp_hand_pose(pair, r, rotation_samples);
        std::vector<OrientedBox> boxes = gripper.hand_boxes(pose, width);
        bool hit = false;
        for (const OrientedBox& b : boxes) {
            if (box_mesh_intersect(b, mesh)) {
                hit = true;
                break;
            }
        }
        if (hit) continue;
        GraspConfig g;
        g.pair = pair;
        g.hand_pose = pose;
        g.jaw_width = pair.width;
        g.rotation_index = r;
        out.push_back(g);
    }
    return out;
}

FreeGraspPlan plan_free_grasps(const TriangleMesh& mesh, const GripperModel& gripper,
                               const GraspPlanParams& params) {
    gripper.validate();
    FreeGraspPlan plan;

    plan.facets = params.segmentation == SegmentationMode::OverSegment
                      ? oversegment(mesh, params.tau)
                      : segment_conventional(mesh, params.tau);

    plan.samples =
        sample_surface(mesh, plan.facets, params.density, params.rng_seed, params.max_samples);

    // Group raw samples by facet, then window + merge per facet.
    std::vector<std::vector<SamplePoint>> by_facet(plan.facets.size());
    for (const SamplePoint& s : plan.samples)
        for (int f : s.facet_ids) by_facet[f].push_back(s);

    double d_min = params.resolved_d_min(gripper);
    double d_max = params.resolved_d_max(gripper);
    double merge_r = params.resolved_merge_radius(gripper);
    std::vector<std::vector<SamplePoint>> filtered(plan.facets.size());
    for (size_t f = 0; f < plan.facets.size(); ++f)
        filtered[f] = filter_samples(mesh, plan.facets[f], by_facet[f], d_min, d_max, merge_r);

    std::vector<ContactPair> raw =
        find_contact_pairs(mesh, plan.facets, filtered, gripper, params.antipodal_tolerance);
    plan.pairs_before_gravity = static_cast<int>(raw.size());

    plan.pairs = gravity_filter(raw, mesh.com, params.resolved_max_lever(mesh));

    double exclusion = params.level1_exclusion_factor * gripper.pad_circumradius();

    // Level 1 + level 2, parallel over pairs with index-addressed results so
    // the output order (and hence grasp ids) is thread-count independent.
    std::vector<char> l1_free(plan.pairs.size(), 0);
    std::vector<std::vector<GraspConfig>> per_pair(plan.pairs.size());
    parallel_for(static_cast<int>(plan.pairs.size()), params.threads, [&](int i) {
        if (collision_level1(plan.pairs[i], gripper, mesh, exclusion)) return;
        l1_free[i] = 1;
        per_pair[i] = collision_level2(plan.pairs[i], params.rotation_samples, gripper, mesh,
                                       params.approach_clearance);
    });

    for (size_t i = 0; i < plan.pairs.size(); ++i) {
        if (l1_free[i]) ++plan.pairs_after_level1;
        for (GraspConfig& g : per_pair[i]) {
            g.id = static_cast<int>(plan.grasps.size());
            plan.grasps.push_back(std::move(g));
        }
    }
    return plan;
}

}  // namespace regrasp
