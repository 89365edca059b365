#pragma once

#include <optional>
#include <sstream>

#include "conleykit/util.hpp"

namespace conleykit {

enum class SurfaceKind { Circle, Sphere, Torus, Rp2Triangulation };

inline const char* to_string(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::Circle: return "circle";
        case SurfaceKind::Sphere: return "sphere";
        case SurfaceKind::Torus: return "torus";
        case SurfaceKind::Rp2Triangulation: return "rp2";
    }
    return "?";
}

/// A built-in closed surface: analytic chart + first fundamental form.
/// The chart formulas are entire and 2pi-periodic in every coordinate, so
/// flow integration runs in unconstrained chart coordinates; `canonical`
/// folds a point back into the fundamental domain for lookups and output.
struct Surface {
    SurfaceKind kind = SurfaceKind::Circle;
    int dim = 1;
    double R = 0, r = 0, rho = 0;
    bool has_chart = true;

    Vec3 chart(Vec2 u) const {
        switch (kind) {
            case SurfaceKind::Circle:
                return {std::cos(u[0]), std::sin(u[0]), 0.0};
            case SurfaceKind::Torus: {
                double w = R + r * std::cos(u[1]);
                return {w * std::cos(u[0]), r * std::sin(u[1]), w * std::sin(u[0])};
            }
            case SurfaceKind::Sphere:
                // poles of the chart sit on the +-x axis, away from the
                // height field's critical points at +-z
                return {rho * std::cos(u[1]), rho * std::sin(u[1]) * std::cos(u[0]),
                        rho * std::sin(u[1]) * std::sin(u[0])};
            case SurfaceKind::Rp2Triangulation:
                throw Error("unsupported-combination", "rp2 triangulation has no chart");
        }
        return {};
    }

    /// Columns of the chart Jacobian (d pos / d u_i).
    std::array<Vec3, 2> jacobian(Vec2 u) const {
        switch (kind) {
            case SurfaceKind::Circle:
                return {Vec3{-std::sin(u[0]), std::cos(u[0]), 0.0}, Vec3{0, 0, 0}};
            case SurfaceKind::Torus: {
                double w = R + r * std::cos(u[1]);
                Vec3 du{-w * std::sin(u[0]), 0.0, w * std::cos(u[0])};
                Vec3 dv{-r * std::sin(u[1]) * std::cos(u[0]), r * std::cos(u[1]),
                        -r * std::sin(u[1]) * std::sin(u[0])};
                return {du, dv};
            }
            case SurfaceKind::Sphere: {
                double sv = std::sin(u[1]), cv = std::cos(u[1]);
                Vec3 du{0.0, -rho * sv * std::sin(u[0]), rho * sv * std::cos(u[0])};
                Vec3 dv{-rho * sv, rho * cv * std::cos(u[0]), rho * cv * std::sin(u[0])};
                return {du, dv};
            }
            case SurfaceKind::Rp2Triangulation:
                throw Error("unsupported-combination", "rp2 triangulation has no chart");
        }
        return {};
    }

    Mat2 metric(Vec2 u) const {
        Mat2 g;
        switch (kind) {
            case SurfaceKind::Circle:
                g.a = 1.0;
                g.d = 1.0;  // unused in 1d
                break;
            case SurfaceKind::Torus: {
                double w = R + r * std::cos(u[1]);
                g.a = w * w;
                g.d = r * r;
                break;
            }
            case SurfaceKind::Sphere: {
                double sv = std::sin(u[1]);
                g.a = rho * rho * sv * sv;
                g.d = rho * rho;
                break;
            }
            case SurfaceKind::Rp2Triangulation:
                throw Error("unsupported-combination", "rp2 triangulation has no metric");
        }
        return g;
    }

    /// Fold a chart point into the fundamental domain.  Sphere points with
    /// v outside [0, pi] are reflected through the chart pole (u += pi).
    Vec2 canonical(Vec2 u) const {
        switch (kind) {
            case SurfaceKind::Circle:
                return {wrap_angle(u[0]), 0.0};
            case SurfaceKind::Torus:
                return {wrap_angle(u[0]), wrap_angle(u[1])};
            case SurfaceKind::Sphere: {
                double v = wrap_angle(u[1]);
                double uu = u[0];
                if (v > kPi) {
                    v = kTwoPi - v;
                    uu += kPi;
                }
                return {wrap_angle(uu), v};
            }
            case SurfaceKind::Rp2Triangulation:
                return u;
        }
        return u;
    }

    /// Distance between chart points: periodic L2 for circle/torus,
    /// geodesic arc rho*angle for the sphere.
    double chart_distance(Vec2 a, Vec2 b) const {
        switch (kind) {
            case SurfaceKind::Circle:
                return std::fabs(wrap_delta(a[0] - b[0]));
            case SurfaceKind::Torus: {
                double du = wrap_delta(a[0] - b[0]);
                double dv = wrap_delta(a[1] - b[1]);
                return std::sqrt(du * du + dv * dv);
            }
            case SurfaceKind::Sphere: {
                double c = dot(chart(a), chart(b)) / (rho * rho);
                c = std::min(1.0, std::max(-1.0, c));
                return rho * std::acos(c);
            }
            case SurfaceKind::Rp2Triangulation:
                throw Error("unsupported-combination", "rp2 triangulation has no chart");
        }
        return 0;
    }
};

struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::Circle;
    double R = 2, r = 1, rho = 1;
};

inline Surface make_surface(const SurfaceSpec& spec) {
    Surface s;
    s.kind = spec.kind;
    switch (spec.kind) {
        case SurfaceKind::Circle:
            s.dim = 1;
            break;
        case SurfaceKind::Torus:
            if (!(spec.R > spec.r && spec.r > 0))
                throw Error("invalid-parameters", "torus requires R > r > 0");
            s.dim = 2;
            s.R = spec.R;
            s.r = spec.r;
            break;
        case SurfaceKind::Sphere:
            if (!(spec.rho > 0)) throw Error("invalid-parameters", "sphere requires rho > 0");
            s.dim = 2;
            s.rho = spec.rho;
            break;
        case SurfaceKind::Rp2Triangulation:
            s.dim = 2;
            s.has_chart = false;
            break;
    }
    return s;
}

/// Parse descriptors like "torus:R=2,r=1", "sphere:rho=1", "circle", "rp2".
inline Surface parse_surface(const std::string& text) {
    SurfaceSpec spec;
    std::string name = text, args;
    if (auto pos = text.find(':'); pos != std::string::npos) {
        name = text.substr(0, pos);
        args = text.substr(pos + 1);
    }
    if (name == "circle")
        spec.kind = SurfaceKind::Circle;
    else if (name == "torus")
        spec.kind = SurfaceKind::Torus;
    else if (name == "sphere")
        spec.kind = SurfaceKind::Sphere;
    else if (name == "rp2" || name == "rp2-triangulation")
        spec.kind = SurfaceKind::Rp2Triangulation;
    else
        throw Error("invalid-parameters", "unknown surface '" + name + "'");

    std::stringstream ss(args);
    std::string kv;
    while (std::getline(ss, kv, ',')) {
        if (kv.empty()) continue;
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw Error("invalid-parameters", "bad surface argument '" + kv + "'");
        std::string key = kv.substr(0, eq);
        double val = std::stod(kv.substr(eq + 1));
        if (key == "R")
            spec.R = val;
        else if (key == "r")
            spec.r = val;
        else if (key == "rho")
            spec.rho = val;
        else
            throw Error("invalid-parameters", "unknown surface parameter '" + key + "'");
    }
    return make_surface(spec);
}

inline std::string surface_descriptor(const Surface& s) {
    std::ostringstream os;
    switch (s.kind) {
        case SurfaceKind::Circle: os << "circle"; break;
        case SurfaceKind::Torus: os << "torus:R=" << s.R << ",r=" << s.r; break;
        case SurfaceKind::Sphere: os << "sphere:rho=" << s.rho; break;
        case SurfaceKind::Rp2Triangulation: os << "rp2"; break;
    }
    return os.str();
}

}  // namespace conleykit
