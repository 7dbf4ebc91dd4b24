#pragma once

#include <cmath>

#include "sapoa/json.hpp"
#include "sapoa/core.hpp"

namespace sapoa {

inline double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

struct Vec2 {
    double x = 0, y = 0;
};

struct Pose {
    double x = 0, y = 0, psi = 0;  // psi normalized to (-pi, pi]
};

struct PidGains {
    double kp = 0, ki = 0, kd = 0;
};

// Gains as deployed on the boats: longitudinal, lateral, rotational.
struct ControllerGains {
    PidGains longitudinal{2210.0, 7.0, 4.67};
    PidGains lateral{1500.0, 10.5, 7.0};
    PidGains rotational{153.0, 2.4, 1.6};

    ControllerGains scaled(double factor) const {
        auto s = [factor](PidGains g) {
            return PidGains{g.kp * factor, g.ki * factor, g.kd * factor};
        };
        return {s(longitudinal), s(lateral), s(rotational)};
    }
};

struct ThrustVector {
    double f1 = 0, f2 = 0, f3 = 0, f4 = 0;
    double arm = 0.1;  // moment arm l, meters
};

struct Wrench {
    double fx = 0, fy = 0, mz = 0;
};

// Straight-line trajectory generator: steps at most s meters from x toward
// the target, along the slope angle of (xg - x).
inline Vec2 next_traj_point(Vec2 x, Vec2 xg, double s) {
    double dx = xg.x - x.x, dy = xg.y - x.y;
    double d = std::hypot(dx, dy);
    if (d == 0.0) return xg;
    double gamma = std::atan2(dy, dx);
    double step = std::min(s, d);
    return {x.x + step * std::cos(gamma), x.y + step * std::sin(gamma)};
}

enum class FrameConvention {
    // The homogeneous transform exactly as deployed: rotation block R(psi)
    // applied to the shifted target.
    AsDeployed,
    // Standard global-to-body rotation R(-psi).
    Standard,
};

// Expresses a global-frame target pose relative to the vehicle pose. The
// deployed transform's rotation sense differs from the textbook one; both
// are available, callers pick.
inline Pose to_body_frame(const Pose& pose, const Pose& target,
                          FrameConvention conv = FrameConvention::AsDeployed) {
    double c = std::cos(pose.psi), s = std::sin(pose.psi);
    double rx, ry;
    if (conv == FrameConvention::AsDeployed) {
        rx = c * target.x - s * target.y - pose.x * c + pose.y * s;
        ry = s * target.x + c * target.y - pose.x * s - pose.y * c;
    } else {
        double dx = target.x - pose.x, dy = target.y - pose.y;
        rx = c * dx + s * dy;
        ry = -s * dx + c * dy;
    }
    return {rx, ry, wrap_angle(target.psi - pose.psi)};
}

// Incremental PID with trapezoidal integral and backward-difference
// derivative. The integral is clamped so ki * integral never exceeds the
// saturation bound.
class PidState {
public:
    PidState(PidGains gains, double output_limit)
        : gains_(gains), limit_(output_limit) {}

    double step(double error, double dt) {
        if (dt <= 0) throw std::invalid_argument("pid_step: dt <= 0");
        if (gains_.ki > 0) {
            integral_ += 0.5 * (error + prev_error_) * dt;
            double clamp = limit_ / gains_.ki;
            integral_ = std::clamp(integral_, -clamp, clamp);
        }
        double derivative = first_ ? 0.0 : (error - prev_error_) / dt;
        prev_error_ = error;
        first_ = false;
        return gains_.kp * error + gains_.ki * integral_ +
               gains_.kd * derivative;
    }

    void reset() {
        integral_ = 0;
        prev_error_ = 0;
        first_ = true;
    }

private:
    PidGains gains_;
    double limit_;
    double integral_ = 0;
    double prev_error_ = 0;
    bool first_ = true;
};

// Thruster layout matrix: tau = B f with
//   B = [0 1 0 1; 1 0 1 0; l -l -l l].
inline Wrench compose_thrust(const ThrustVector& f) {
    return {f.f2 + f.f4, f.f1 + f.f3,
            f.arm * (f.f1 - f.f2 - f.f3 + f.f4)};
}

// Minimum-norm inverse of compose_thrust. B's rows are orthogonal, so the
// pseudoinverse reduces to closed form:
//   f = B^T diag(1/2, 1/2, 1/(4 l^2)) tau.
// Commands past f_max are scaled down uniformly, preserving direction.
inline ThrustVector allocate_thrust(const Wrench& tau, double arm,
                                    double f_max) {
    if (arm <= 0) throw std::invalid_argument("allocate_thrust: arm <= 0");
    double m = tau.mz / (4.0 * arm);
    ThrustVector f;
    f.arm = arm;
    f.f1 = tau.fy / 2.0 + m;
    f.f2 = tau.fx / 2.0 - m;
    f.f3 = tau.fy / 2.0 - m;
    f.f4 = tau.fx / 2.0 + m;
    double peak = std::max({std::abs(f.f1), std::abs(f.f2), std::abs(f.f3),
                            std::abs(f.f4)});
    if (peak > f_max) {
        double scale = f_max / peak;
        f.f1 *= scale;
        f.f2 *= scale;
        f.f3 *= scale;
        f.f4 *= scale;
    }
    return f;
}

struct PlantModel {
    double mass = 6.0;             // kg
    double linear_damping = 12.0;  // N s / m
    double yaw_inertia = 0.08;     // kg m^2
    double yaw_damping = 0.5;      // N m s
};

struct TrackConfig {
    double step_length = 0.25;    // trajectory generator step s, meters
    double cell_size = 0.25;      // grid pitch, meters
    double update_period = 4.0;   // waypoint selection at 0.25 Hz
    double dt = 0.02;             // control/integration step
    double arm = 0.1;             // thruster moment arm
    double f_max = 10.0;          // per-thruster saturation
    // Table gains are sized for the real boat; one shared factor adapts
    // them to the simulated plant while keeping the published ratios.
    double gains_scale = 0.01;
    PlantModel plant;
    FrameConvention convention = FrameConvention::Standard;
};

struct TrackSample {
    double t = 0;
    double x = 0, y = 0, psi = 0;
    double following_error = 0;  // d: distance to the current waypoint
    double lateral_error = 0;    // d cos(gamma)
};

struct ContinuousTrace {
    double dt = 0;
    std::vector<TrackSample> samples;
};

// Point-boat simulation of the control pipeline: waypoint selection at the
// update period, straight-line sub-goals, three PID loops on body-frame
// errors, thrust allocation and composition, planar damped rigid body.
inline ContinuousTrace simulate_track(const std::vector<Vec2>& waypoints,
                                      const ControllerGains& base_gains,
                                      const TrackConfig& cfg,
                                      Pose start = {}) {
    if (waypoints.empty())
        throw std::invalid_argument("simulate_track: empty path");
    if (cfg.dt <= 0 || cfg.dt >= cfg.update_period)
        throw std::invalid_argument("simulate_track: bad dt/update_period");

    ControllerGains gains = base_gains.scaled(cfg.gains_scale);
    PidState pid_lon(gains.longitudinal, cfg.f_max);
    PidState pid_lat(gains.lateral, cfg.f_max);
    PidState pid_rot(gains.rotational, cfg.f_max);

    Pose pose = start;
    double vx = 0, vy = 0, vpsi = 0;
    size_t wp = 0;
    double since_update = cfg.update_period;  // pick the first waypoint at t=0

    ContinuousTrace trace;
    trace.dt = cfg.dt;
    double t = 0;
    // One settling window after the final waypoint is selected.
    double t_end = cfg.update_period * static_cast<double>(waypoints.size()) +
                   20.0;

    while (t < t_end) {
        since_update += cfg.dt;
        if (since_update >= cfg.update_period && wp + 1 < waypoints.size()) {
            ++wp;
            since_update = 0;
        }
        if (t == 0) {
            wp = 0;
            since_update = 0;
        }
        Vec2 target = waypoints[wp];
        Vec2 here{pose.x, pose.y};
        double dx = target.x - pose.x, dy = target.y - pose.y;
        double d = std::hypot(dx, dy);
        double gamma = d > 0 ? std::atan2(dy, dx) : 0.0;

        Vec2 sub_goal = next_traj_point(here, target, cfg.step_length);
        Pose body = to_body_frame(pose, {sub_goal.x, sub_goal.y, 0.0},
                                  cfg.convention);

        Wrench tau;
        tau.fx = pid_lon.step(body.x, cfg.dt);
        tau.fy = pid_lat.step(body.y, cfg.dt);
        tau.mz = pid_rot.step(body.psi, cfg.dt);

        ThrustVector f = allocate_thrust(tau, cfg.arm, cfg.f_max);
        Wrench applied = compose_thrust(f);

        // Body-frame force into the world frame.
        double c = std::cos(pose.psi), s = std::sin(pose.psi);
        double fx_w = c * applied.fx - s * applied.fy;
        double fy_w = s * applied.fx + c * applied.fy;

        const PlantModel& pl = cfg.plant;
        vx += (fx_w - pl.linear_damping * vx) / pl.mass * cfg.dt;
        vy += (fy_w - pl.linear_damping * vy) / pl.mass * cfg.dt;
        vpsi += (applied.mz - pl.yaw_damping * vpsi) / pl.yaw_inertia * cfg.dt;
        pose.x += vx * cfg.dt;
        pose.y += vy * cfg.dt;
        pose.psi = wrap_angle(pose.psi + vpsi * cfg.dt);

        if (!std::isfinite(pose.x) || !std::isfinite(pose.y) ||
            !std::isfinite(pose.psi))
            throw std::runtime_error("simulate_track: dynamics diverged");

        trace.samples.push_back(
            {t, pose.x, pose.y, pose.psi, d, d * std::cos(gamma)});
        t += cfg.dt;

        if (wp + 1 == waypoints.size() && d < 0.01 &&
            std::hypot(vx, vy) < 0.01)
            break;  // settled on the final waypoint
    }
    return trace;
}

// Grid-cell waypoints (from a discrete trace) to meters.
inline std::vector<Vec2> cells_to_waypoints(const std::vector<Cell>& cells,
                                            double cell_size) {
    std::vector<Vec2> out;
    out.reserve(cells.size());
    for (Cell c : cells)
        out.push_back({(c.x + 0.5) * cell_size, (c.y + 0.5) * cell_size});
    return out;
}

inline nlohmann::ordered_json continuous_trace_to_json(
    const ContinuousTrace& trace) {
    nlohmann::ordered_json j;
    j["dt"] = trace.dt;
    j["samples"] = nlohmann::ordered_json::array();
    for (const auto& s : trace.samples)
        j["samples"].push_back({{"t", s.t},
                                {"x", s.x},
                                {"y", s.y},
                                {"psi", s.psi},
                                {"d", s.following_error},
                                {"d_lat", s.lateral_error}});
    return j;
}

}  // namespace sapoa
