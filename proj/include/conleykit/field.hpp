#pragma once

#include "conleykit/surface.hpp"

namespace conleykit {

enum class FieldKind { Height, CosTheta, CubicCircle, DoubleWell };

inline const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::Height: return "height";
        case FieldKind::CosTheta: return "cos-theta";
        case FieldKind::CubicCircle: return "cubic-circle";
        case FieldKind::DoubleWell: return "double-well";
    }
    return "?";
}

/// C^2 function on a built-in surface with exact chart derivatives.
/// The Riemannian gradient g^{-1} df is derived, never stored.
struct ScalarField {
    Surface surface;
    FieldKind kind = FieldKind::CosTheta;
    double sign = 1.0;  // -1 runs the pipeline on -f (the U_i variant)

    double f(Vec2 u) const {
        switch (kind) {
            case FieldKind::Height:
                if (surface.kind == SurfaceKind::Torus)
                    return sign * (surface.R + surface.r * std::cos(u[1])) * std::sin(u[0]);
                return sign * surface.rho * std::sin(u[1]) * std::sin(u[0]);
            case FieldKind::CosTheta:
                return sign * std::cos(u[0]);
            case FieldKind::CubicCircle: {
                double s = std::sin(u[0]);
                return sign * s * s * s;
            }
            case FieldKind::DoubleWell:
                return sign * std::cos(2.0 * u[0]);
        }
        return 0;
    }

    /// Chart gradient (partial derivatives), not the Riemannian gradient.
    Vec2 df(Vec2 u) const {
        switch (kind) {
            case FieldKind::Height:
                if (surface.kind == SurfaceKind::Torus) {
                    double w = surface.R + surface.r * std::cos(u[1]);
                    return {sign * w * std::cos(u[0]),
                            sign * -surface.r * std::sin(u[1]) * std::sin(u[0])};
                }
                return {sign * surface.rho * std::sin(u[1]) * std::cos(u[0]),
                        sign * surface.rho * std::cos(u[1]) * std::sin(u[0])};
            case FieldKind::CosTheta:
                return {sign * -std::sin(u[0]), 0.0};
            case FieldKind::CubicCircle: {
                double s = std::sin(u[0]);
                return {sign * 3.0 * s * s * std::cos(u[0]), 0.0};
            }
            case FieldKind::DoubleWell:
                return {sign * -2.0 * std::sin(2.0 * u[0]), 0.0};
        }
        return {};
    }

    Mat2 d2f(Vec2 u) const {
        Mat2 h;
        switch (kind) {
            case FieldKind::Height:
                if (surface.kind == SurfaceKind::Torus) {
                    double w = surface.R + surface.r * std::cos(u[1]);
                    h.a = sign * -w * std::sin(u[0]);
                    h.b = sign * -surface.r * std::sin(u[1]) * std::cos(u[0]);
                    h.d = sign * -surface.r * std::cos(u[1]) * std::sin(u[0]);
                } else {
                    h.a = sign * -surface.rho * std::sin(u[1]) * std::sin(u[0]);
                    h.b = sign * surface.rho * std::cos(u[1]) * std::cos(u[0]);
                    h.d = sign * -surface.rho * std::sin(u[1]) * std::sin(u[0]);
                }
                break;
            case FieldKind::CosTheta:
                h.a = sign * -std::cos(u[0]);
                break;
            case FieldKind::CubicCircle: {
                double s = std::sin(u[0]), c = std::cos(u[0]);
                h.a = sign * (6.0 * s * c * c - 3.0 * s * s * s);
                break;
            }
            case FieldKind::DoubleWell:
                h.a = sign * -4.0 * std::cos(2.0 * u[0]);
                break;
        }
        return h;
    }

    /// Riemannian gradient g^{-1} df.
    Vec2 grad(Vec2 u) const { return surface.metric(u).solve(df(u)); }

    /// ||grad f||_g = sqrt(df . g^{-1} df).
    double grad_norm(Vec2 u) const {
        Vec2 d = df(u);
        Vec2 x = surface.metric(u).solve(d);
        double s2 = dot(d, x);
        return s2 > 0 ? std::sqrt(s2) : 0.0;
    }

    int dim() const { return surface.dim; }

    ScalarField negated() const {
        ScalarField g = *this;
        g.sign = -g.sign;
        return g;
    }
};

inline ScalarField builtin_field(const std::string& name, const Surface& s) {
    ScalarField field;
    field.surface = s;
    if (name == "height") {
        if (s.kind != SurfaceKind::Torus && s.kind != SurfaceKind::Sphere)
            throw Error("unsupported-combination", "height requires an embedded 2d surface");
        field.kind = FieldKind::Height;
    } else if (name == "cos-theta") {
        if (s.kind != SurfaceKind::Circle)
            throw Error("unsupported-combination", "cos-theta requires the circle");
        field.kind = FieldKind::CosTheta;
    } else if (name == "cubic-circle") {
        if (s.kind != SurfaceKind::Circle)
            throw Error("unsupported-combination", "cubic-circle requires the circle");
        field.kind = FieldKind::CubicCircle;
    } else if (name == "double-well") {
        if (s.kind != SurfaceKind::Circle)
            throw Error("unsupported-combination", "double-well requires the circle");
        field.kind = FieldKind::DoubleWell;
    } else {
        throw Error("invalid-parameters", "unknown field '" + name + "'");
    }
    return field;
}

}  // namespace conleykit
