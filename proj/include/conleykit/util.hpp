#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace conleykit {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Error with a stable machine-readable code ("invalid-parameters", ...).
struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& what_arg)
        : std::runtime_error(c + ": " + what_arg), code(std::move(c)) {}
};

inline double wrap_angle(double x) {
    double y = x - kTwoPi * std::floor(x / kTwoPi);
    if (y >= kTwoPi) y -= kTwoPi;
    if (y < 0) y += kTwoPi;
    return y;
}

/// Signed angular difference in [-pi, pi).
inline double wrap_delta(double x) {
    double y = wrap_angle(x);
    return y >= kPi ? y - kTwoPi : y;
}

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a[0], s * a[1]}; }
inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

inline Vec3 operator-(Vec3 a, Vec3 b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline double dot(Vec3 a, Vec3 b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double dist(Vec3 a, Vec3 b) { return norm(a - b); }

/// Symmetric 2x2 matrix (first fundamental forms, Hessians).
struct Mat2 {
    double a = 0, b = 0, d = 0;  // [[a, b], [b, d]]

    double det() const { return a * d - b * b; }

    /// Solve M x = rhs.  Zero rhs components are skipped so that a
    /// degenerate diagonal entry (chart pole) does not produce 0 * inf.
    Vec2 solve(Vec2 rhs) const {
        if (b == 0.0) {
            Vec2 x{0, 0};
            if (rhs[0] != 0.0) x[0] = rhs[0] / a;
            if (rhs[1] != 0.0) x[1] = rhs[1] / d;
            return x;
        }
        double dt = det();
        return {(d * rhs[0] - b * rhs[1]) / dt, (a * rhs[1] - b * rhs[0]) / dt};
    }

    /// Generalized eigenvalues of (H, G), G symmetric positive definite:
    /// roots of det(H - lambda G) = 0.  Both are real.
    static std::array<double, 2> pencil_eigenvalues(const Mat2& H, const Mat2& G) {
        double A = G.det();
        double B = -(H.a * G.d + H.d * G.a - 2.0 * H.b * G.b);
        double C = H.det();
        double disc = B * B - 4.0 * A * C;
        if (disc < 0) disc = 0;  // symmetric pencil: clamp rounding noise
        double sq = std::sqrt(disc);
        double l0 = (-B - sq) / (2.0 * A);
        double l1 = (-B + sq) / (2.0 * A);
        return {l0, l1};
    }
};

/// Deterministic, platform-independent RNG (splitmix64).
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    int uniform_int(int n) { return int(uniform() * n); }
};

inline int thread_budget() {
    static int budget = [] {
        if (const char* env = std::getenv("CONLEY_KIT_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? int(hw) : 1;
    }();
    return budget;
}

/// Index-parallel loop; body(i) must only touch slot i of its outputs, so the
/// result is independent of the thread count.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    int nt = thread_budget();
    if (nt <= 1 || n < 128) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace conleykit
