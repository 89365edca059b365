#pragma once

#include "conleykit/critical.hpp"

namespace conleykit {

struct FlowParams {
    double h0 = 1e-2;          // initial step
    double h_min = 1e-6;       // adaptive floor (step-underflow below)
    double h_cap = 5e-2;       // growth ceiling in slow regions
    double tol_int = 1e-8;     // per-step f mismatch between h and h/2 re-integration
    double delta_conv = 1e-8;  // ||grad f|| threshold for limit detection
    double horizon = 200.0;
    double tol_level = 1e-9;   // level-crossing refinement
    double tol_mono = 1e-9;
    double match_radius = 0.1;  // embedded radius for critical-point matching
};

enum class Termination { Horizon, Converged, CrossedTarget, EventStop };

struct TrajectorySample {
    double t;
    Vec2 u;
    double f;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double h = 0;  // last accepted step
    Termination reason = Termination::Horizon;
    int converged_to = -1;
};

namespace detail {

inline Vec2 flow_rhs(const ScalarField& field, Vec2 u, int dir) {
    // forward (dir=+1) is the downward flow u' = -grad f
    return double(-dir) * field.grad(u);
}

inline Vec2 rk4_step(const ScalarField& field, Vec2 u, double h, int dir) {
    Vec2 k1 = flow_rhs(field, u, dir);
    Vec2 k2 = flow_rhs(field, u + (h / 2) * k1, dir);
    Vec2 k3 = flow_rhs(field, u + (h / 2) * k2, dir);
    Vec2 k4 = flow_rhs(field, u + h * k3, dir);
    return u + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// One accepted adaptive step: classical RK4 with step-doubling control on
/// the f value.  Returns the step actually taken; throws on underflow.
inline double adaptive_step(const ScalarField& field, Vec2& u, double& h, int dir,
                            double max_h, const FlowParams& prm) {
    h = std::min(h, max_h);
    for (;;) {
        Vec2 full = rk4_step(field, u, h, dir);
        Vec2 half = rk4_step(field, rk4_step(field, u, h / 2, dir), h / 2, dir);
        double err = std::fabs(field.f(full) - field.f(half));
        if (std::isfinite(err) && err <= prm.tol_int) {
            u = half;
            double taken = h;
            if (err < prm.tol_int / 16 && h < max_h) h = std::min({2 * h, prm.h_cap, max_h});
            return taken;
        }
        h /= 2;
        if (h < prm.h_min)
            throw Error("step-underflow",
                        "adaptive step below h_min near a chart singularity");
    }
}

/// Drive the flow from p for at most `duration` (unsigned) in direction
/// dir, invoking visit(t, u) after every accepted step (and once at t=0).
/// visit returns false to stop early.
template <class Visit>
double flow_visit(const ScalarField& field, Vec2 p, int dir, double duration,
                  const FlowParams& prm, Visit&& visit) {
    Vec2 u = p;
    double t = 0, h = prm.h0;
    if (!visit(t, u)) return t;
    while (t < duration) {
        double taken = adaptive_step(field, u, h, dir, duration - t, prm);
        t += taken;
        if (!visit(t, u)) break;
    }
    return t;
}

}  // namespace detail

/// Integrate the downward gradient flow for signed time t (t < 0 integrates
/// +grad f), storing every accepted sample.  phi_0 p = p exactly.
inline Trajectory integrate(const ScalarField& field, Vec2 p, double t,
                            const FlowParams& prm = {}) {
    Trajectory traj;
    int dir = t >= 0 ? 1 : -1;
    double dur = std::fabs(t);
    detail::flow_visit(field, p, dir, dur, prm, [&](double tt, Vec2 u) {
        traj.samples.push_back({dir * tt, u, field.f(u)});
        return true;
    });
    traj.reason = Termination::Horizon;
    if (traj.samples.size() >= 2)
        traj.h = traj.samples.back().t - traj.samples[traj.samples.size() - 2].t;
    return traj;
}

/// phi_t p without sample storage.
inline Vec2 advance(const ScalarField& field, Vec2 p, double t, const FlowParams& prm = {}) {
    Vec2 u = p;
    int dir = t >= 0 ? 1 : -1;
    detail::flow_visit(field, p, dir, std::fabs(t), prm, [&](double, Vec2 q) {
        u = q;
        return true;
    });
    return u;
}

/// phi at several forward times 0 < t_1 < ... < t_k in one integration pass.
inline std::vector<Vec2> advance_checkpoints(const ScalarField& field, Vec2 p,
                                             const std::vector<double>& times,
                                             const FlowParams& prm = {}) {
    std::vector<Vec2> out(times.size());
    if (times.empty()) return out;
    Vec2 u = p;
    double t = 0, h = prm.h0;
    std::size_t next = 0;
    while (next < times.size()) {
        double target = times[next];
        if (t >= target - 1e-15) {
            out[next++] = u;
            continue;
        }
        t += detail::adaptive_step(field, u, h, 1, target - t, prm);
    }
    return out;
}

struct LimitResult {
    bool converged = false;
    int crit_id = -1;
    Vec2 final_point{};
    double final_grad_norm = 0;
    double time = 0;  // unsigned flow duration used
};

namespace detail {

inline LimitResult flow_limit(const ScalarField& field, Vec2 p, int dir,
                              const std::vector<CriticalPoint>& crits, double delta_conv,
                              double horizon, const FlowParams& prm) {
    LimitResult res;
    FlowParams loc = prm;
    loc.delta_conv = delta_conv;
    flow_visit(field, p, dir, horizon, loc, [&](double t, Vec2 u) {
        res.final_point = u;
        res.time = t;
        double g = field.grad_norm(u);
        res.final_grad_norm = g;
        if (g < delta_conv) {
            int id = match_critical_point(crits, field.surface, u, prm.match_radius);
            if (id >= 0) {
                res.converged = true;
                res.crit_id = id;
                return false;
            }
        }
        return true;
    });
    return res;
}

}  // namespace detail

/// Asymptotic forward limit: integrate until ||grad f|| < delta_conv within
/// matching radius of a known critical point.  Non-convergence within the
/// horizon is reported in the result, not thrown.
inline LimitResult forward_limit(const ScalarField& field, Vec2 p,
                                 const std::vector<CriticalPoint>& crits,
                                 double delta_conv = 1e-8, double horizon = 200.0,
                                 const FlowParams& prm = {}) {
    return detail::flow_limit(field, p, 1, crits, delta_conv, horizon, prm);
}

inline LimitResult backward_limit(const ScalarField& field, Vec2 p,
                                  const std::vector<CriticalPoint>& crits,
                                  double delta_conv = 1e-8, double horizon = 200.0,
                                  const FlowParams& prm = {}) {
    return detail::flow_limit(field, p, -1, crits, delta_conv, horizon, prm);
}

/// Signed arrival time at a level set: the unique T with f(phi_T p) = target,
/// bisection-refined to |f - target| <= tol_level.  dir = +1 searches the
/// forward (downward) trajectory, dir = -1 the backward one.
inline double arrival_time(const ScalarField& field, Vec2 p, double target, int dir,
                           const FlowParams& prm = {}, double horizon = -1) {
    if (horizon < 0) horizon = prm.horizon;
    double f0 = field.f(p);
    if (std::fabs(f0 - target) <= prm.tol_level) return 0.0;
    // f is monotone along the flow: forward can only reach lower levels
    if (dir > 0 && target > f0)
        throw Error("no-crossing", "target level above f(p) on the forward trajectory");
    if (dir < 0 && target < f0)
        throw Error("no-crossing", "target level below f(p) on the backward trajectory");

    double t_prev = 0;
    Vec2 u_prev = p;
    double f_prev = f0;
    bool found = false;
    double t_lo = 0, t_hi = 0;
    Vec2 u_base{};
    detail::flow_visit(field, p, dir, horizon, prm, [&](double t, Vec2 u) {
        double fv = field.f(u);
        if ((f_prev - target) * (fv - target) <= 0) {
            found = true;
            t_lo = 0;
            t_hi = t - t_prev;
            u_base = u_prev;
            return false;
        }
        t_prev = t;
        u_prev = u;
        f_prev = fv;
        return true;
    });
    if (!found) throw Error("no-crossing", "level not reached within horizon");

    // bisection on the time offset inside the bracketing step
    double flo = field.f(u_base) - target;
    for (int it = 0; it < 200; ++it) {
        double tm = (t_lo + t_hi) / 2;
        double fm = field.f(detail::rk4_step(field, u_base, tm, dir)) - target;
        if (std::fabs(fm) <= prm.tol_level) { t_lo = t_hi = tm; break; }
        if ((flo < 0) == (fm < 0)) {
            t_lo = tm;
            flo = fm;
        } else {
            t_hi = tm;
        }
        if (t_hi - t_lo < 1e-16) break;
    }
    double tau = t_prev + (t_lo + t_hi) / 2;
    return dir * tau;
}

/// Follow X = -grad f / ||grad f||^2, which drops f at unit rate, through a
/// level difference dc.  The band [f(p)-dc, f(p)] must be free of critical
/// values of the field.
inline Vec2 level_flow(const ScalarField& field, Vec2 p, double dc,
                       const std::vector<CriticalPoint>& crits, const FlowParams& prm = {}) {
    if (dc == 0) return p;
    if (dc < 0) throw Error("invalid-parameters", "level drop must be >= 0");
    double f0 = field.f(p);
    for (auto& c : crits)
        if (c.value > f0 - dc - prm.tol_level && c.value < f0 + prm.tol_level)
            throw Error("critical-level-in-range",
                        "critical value " + std::to_string(c.value) + " inside the drop band");

    auto rhs = [&](Vec2 u) {
        Vec2 g = field.grad(u);
        Vec2 d = field.df(u);
        double n2 = dot(d, g);  // ||grad f||_g^2
        if (n2 < 1e-14)
            throw Error("critical-level-in-range", "||grad f|| vanished inside the band");
        return (-1.0 / n2) * g;
    };
    Vec2 u = p;
    double remaining = dc;
    while (remaining > 1e-13) {
        double h = std::min(prm.h0, remaining);
        Vec2 k1 = rhs(u);
        Vec2 k2 = rhs(u + (h / 2) * k1);
        Vec2 k3 = rhs(u + (h / 2) * k2);
        Vec2 k4 = rhs(u + h * k3);
        u = u + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        remaining -= h;
    }
    // polish: X drops f at unit rate, so the residual is a time offset
    for (int it = 0; it < 50; ++it) {
        double err = field.f(u) - (f0 - dc);
        if (std::fabs(err) <= prm.tol_level) break;
        Vec2 k = rhs(u);
        u = u + err * k;
    }
    return u;
}

/// CSV export: "t,u,v,f" (1d meshes omit v).
inline void export_trajectory_csv(const Trajectory& traj, int dim, std::ostream& os) {
    os << (dim == 1 ? "t,u,f" : "t,u,v,f") << "\n";
    for (auto& s : traj.samples) {
        os << s.t << "," << s.u[0];
        if (dim == 2) os << "," << s.u[1];
        os << "," << s.f << "\n";
    }
}

}  // namespace conleykit
