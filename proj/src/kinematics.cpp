#include "regrasp/kinematics.hpp"

#include "regrasp/errors.hpp"
#include "regrasp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace regrasp {

RobotModel RobotModel::from_config(const ConfigFile& cfg) {
    RobotModel robot;
    robot.name = cfg.get_string("name");
    if (cfg.has("base_pose")) robot.base_pose = cfg.get_pose("base_pose");
    if (cfg.has("tool_transform")) robot.tool_transform = cfg.get_pose("tool_transform");

    std::set<int> indices;
    for (const std::string& key : cfg.keys_with_prefix("joint.")) {
        size_t dot = key.find('.', 6);
        if (dot == std::string::npos)
            throw InvalidInputError(cfg.origin() + ": malformed joint key '" + key + "'");
        indices.insert(std::stoi(key.substr(6, dot - 6)));
    }
    for (int i : indices) {
        std::string prefix = "joint." + std::to_string(i) + ".";
        Joint j;
        j.name = "joint" + std::to_string(i);
        j.axis = cfg.get_vec3(prefix + "axis").normalized();
        if (cfg.has(prefix + "origin")) j.origin = cfg.get_pose(prefix + "origin");
        std::vector<double> lim = cfg.get_numbers(prefix + "limits");
        if (lim.size() != 2)
            throw InvalidInputError(cfg.origin() + ": joint limits need exactly 2 numbers (" +
                                    prefix + "limits)");
        j.lo = lim[0];
        j.hi = lim[1];
        robot.joints.push_back(std::move(j));
    }
    robot.validate();
    return robot;
}

void RobotModel::validate() const {
    if (joints.empty()) throw InvalidInputError("robot has no joints");
    for (const Joint& j : joints) {
        if (j.lo >= j.hi)
            throw InvalidInputError("robot '" + name + "': joint limits not well-ordered");
        if (j.axis.norm() < 1e-9)
            throw InvalidInputError("robot '" + name + "': zero joint axis");
    }
}

Eigen::VectorXd RobotModel::home() const {
    Eigen::VectorXd q(dof());
    for (int i = 0; i < dof(); ++i) q[i] = 0.5 * (joints[i].lo + joints[i].hi);
    return q;
}

double RobotModel::reach_radius() const {
    double r = tool_transform.translation().norm();
    for (const Joint& j : joints) r += j.origin.translation().norm();
    return r;
}

Transform fk(const RobotModel& robot, const Eigen::VectorXd& q) {
    if (q.size() != robot.dof()) throw InvalidInputError("fk: joint vector dimension mismatch");
    Transform pose = robot.base_pose;
    for (int i = 0; i < robot.dof(); ++i) {
        const Joint& j = robot.joints[i];
        if (q[i] < j.lo - 1e-9 || q[i] > j.hi + 1e-9)
            throw InvalidInputError("fk: joint " + std::to_string(i) + " out of limits");
        pose = pose * j.origin * Transform(Eigen::AngleAxisd(q[i], j.axis));
    }
    return pose * robot.tool_transform;
}

namespace {

// 6 x n geometric Jacobian (linear over angular) plus the current hand pose.
Transform fk_with_jacobian(const RobotModel& robot, const Eigen::VectorXd& q,
                           Eigen::Matrix<double, 6, Eigen::Dynamic>& jac) {
    int n = robot.dof();
    std::vector<Vec3> axes(n), origins(n);
    Transform pose = robot.base_pose;
    for (int i = 0; i < n; ++i) {
        pose = pose * robot.joints[i].origin;
        axes[i] = pose.linear() * robot.joints[i].axis;
        origins[i] = pose.translation();
        pose = pose * Transform(Eigen::AngleAxisd(q[i], robot.joints[i].axis));
    }
    pose = pose * robot.tool_transform;
    Vec3 tip = pose.translation();
    jac.resize(6, n);
    for (int i = 0; i < n; ++i) {
        jac.col(i).head<3>() = axes[i].cross(tip - origins[i]);
        jac.col(i).tail<3>() = axes[i];
    }
    return pose;
}

Eigen::Matrix<double, 6, 1> pose_error(const Transform& target, const Transform& current) {
    Eigen::Matrix<double, 6, 1> e;
    e.head<3>() = target.translation() - current.translation();
    Eigen::AngleAxisd aa(target.linear() * current.linear().transpose());
    e.tail<3>() = aa.angle() * aa.axis();
    return e;
}

}  // namespace

std::optional<Eigen::VectorXd> ik_solve(const RobotModel& robot, const Transform& target,
                                        const IkParams& params) {
    // Quick reject: the hand can never leave the base's reach sphere.
    double dist = (target.translation() - robot.base_pose.translation()).norm();
    if (dist > robot.reach_radius() + params.tol_pos) return std::nullopt;

    int n = robot.dof();
    Rng rng(params.rng_seed);
    Eigen::Matrix<double, 6, Eigen::Dynamic> jac;

    for (int attempt = 0; attempt < std::max(1, params.seeds); ++attempt) {
        Eigen::VectorXd q(n);
        if (attempt == 0) {
            q = robot.home();
        } else {
            for (int i = 0; i < n; ++i)
                q[i] = robot.joints[i].lo + rng.uniform() * (robot.joints[i].hi - robot.joints[i].lo);
        }

        for (int iter = 0; iter < params.max_iterations; ++iter) {
            Transform current = fk_with_jacobian(robot, q, jac);
            Eigen::Matrix<double, 6, 1> e = pose_error(target, current);
            if (e.head<3>().norm() <= params.tol_pos && e.tail<3>().norm() <= params.tol_rot) {
                for (int i = 0; i < n; ++i)
                    if (q[i] < robot.joints[i].lo || q[i] > robot.joints[i].hi) return std::nullopt;
                return q;
            }
            Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose();
            jjt.diagonal().array() += params.damping * params.damping;
            Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(e);
            // Trust region keeps the linearization honest on far targets.
            double step = dq.norm();
            if (step > 0.5) dq *= 0.5 / step;
            if (step < 1e-12) break;  // stagnated
            q += dq;
            for (int i = 0; i < n; ++i) q[i] = std::clamp(q[i], robot.joints[i].lo, robot.joints[i].hi);
        }
    }
    return std::nullopt;
}

IkFeasibility grip_feasibility(const RobotModel& robot, const Transform& grip_pose,
                               const RetractionSpec& ret, const IkParams& params) {
    if (ret.handx_distance < 0.0 || ret.worldz_distance < 0.0)
        throw InvalidInputError("retraction distances must be >= 0");

    Transform retracted = grip_pose * translate(Vec3(-ret.handx_distance, 0.0, 0.0));
    Transform lifted = translate(Vec3(0.0, 0.0, ret.worldz_distance)) * retracted;

    IkFeasibility out;
    out.feasibility = ik_solve(robot, grip_pose, params).has_value();
    out.feasibility_handx = ik_solve(robot, retracted, params).has_value();
    out.feasibility_handxworldz = ik_solve(robot, lifted, params).has_value();
    return out;
}

}  // namespace regrasp
