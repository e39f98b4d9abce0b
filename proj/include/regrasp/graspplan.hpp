#pragma once

#include "regrasp/gripper.hpp"
#include "regrasp/mesh.hpp"
#include "regrasp/sampling.hpp"
#include "regrasp/segmentation.hpp"

#include <cstdint>
#include <vector>

namespace regrasp {

// Two antipodal surface contacts. Normals are the outward normals of the
// host triangles, so antipodality reads angle(n0, -n1) <= tolerance.
struct ContactPair {
    Vec3 p0, p1;
    Vec3 n0, n1;
    int facet0 = -1, facet1 = -1;
    double width = 0.0;
    Vec3 center;
};

struct GraspConfig {
    int id = -1;
    ContactPair pair;
    Transform hand_pose = Transform::Identity();  // object frame
    double jaw_width = 0.0;
    int rotation_index = 0;
};

enum class SegmentationMode { OverSegment, Conventional };

struct GraspPlanParams {
    double tau = 10.0 * M_PI / 180.0;
    SegmentationMode segmentation = SegmentationMode::OverSegment;
    double density = 400.0;       // samples per m^2
    int max_samples = 10000;
    double antipodal_tolerance = 10.0 * M_PI / 180.0;
    int rotation_samples = 8;
    // Non-positive values resolve to the documented defaults: d_min = pad
    // circumradius, d_max = palm_offset, merge_radius = half the pad
    // circumradius, max_lever = 0.6 * bounding-sphere radius.
    double d_min = -1.0;
    double d_max = -1.0;
    double merge_radius = -1.0;
    double max_lever = -1.0;
    double approach_clearance = 0.002;  // added to jaw width in level 2
    double level1_exclusion_factor = 1.5;  // x pad circumradius
    uint64_t rng_seed = 0;
    int threads = 1;

    double resolved_d_min(const GripperModel& g) const;
    double resolved_d_max(const GripperModel& g) const;
    double resolved_merge_radius(const GripperModel& g) const;
    double resolved_max_lever(const TriangleMesh& mesh) const;
};

// Distance filter followed by the fixed-radius near-neighbour merge: keeps
// samples whose boundary distance lies in [d_min, d_max], then scans in input
// order dropping any sample within merge_radius of an already kept one.
std::vector<SamplePoint> filter_samples(const TriangleMesh& mesh, const Facet& facet,
                                        const std::vector<SamplePoint>& samples, double d_min,
                                        double d_max, double merge_radius);

// Casts every filtered sample of each facet through the mesh along its
// inverse normal; a first hit landing on a facet whose normal opposes the
// source within tolerance, with a gap inside the jaw range, becomes a pair.
std::vector<ContactPair> find_contact_pairs(const TriangleMesh& mesh,
                                            const std::vector<Facet>& facets,
                                            const std::vector<std::vector<SamplePoint>>& facet_samples,
                                            const GripperModel& gripper,
                                            double antipodal_tolerance);

std::vector<ContactPair> gravity_filter(const std::vector<ContactPair>& pairs, const Vec3& com,
                                        double max_lever);

// Rotation-invariant closing-sweep test: two cylinders along the contact
// axis, one per finger, from each contact point outward by max_jaw_width/2.
// Triangles nearer to the respective contact than `exclusion_radius` are the
// touched surface and don't count.
bool collision_level1(const ContactPair& pair, const GripperModel& gripper,
                      const TriangleMesh& mesh, double exclusion_radius);

// Full hand model vs mesh at each sampled rotation about the contact axis.
std::vector<GraspConfig> collision_level2(const ContactPair& pair, int rotation_samples,
                                          const GripperModel& gripper, const TriangleMesh& mesh,
                                          double approach_clearance);

// Hand pose for one sampled rotation: z along p1-p0, origin at the pair
// center, zero rotation referenced to stable_perpendicular of the axis.
Transform grasp_hand_pose(const ContactPair& pair, int rotation_index, int rotation_samples);

struct FreeGraspPlan {
    std::vector<Facet> facets;
    std::vector<SamplePoint> samples;
    std::vector<ContactPair> pairs;          // after gravity filter
    std::vector<GraspConfig> grasps;
    int pairs_before_gravity = 0;
    int pairs_after_level1 = 0;
};

// Full free-air pipeline: segment, sample, filter, pair, gravity, two-level
// collision. Deterministic for a fixed seed; grasp ids follow (pair, rotation)
// order.
FreeGraspPlan plan_free_grasps(const TriangleMesh& mesh, const GripperModel& gripper,
                               const GraspPlanParams& params);

}  // namespace regrasp
