#pragma once

/**
 * Spin-1/2 rotation algebra.
 *
 * A Rotation is stored as a unit quaternion (w, x, y, z) with
 * w = cos(a/2) and (x, y, z) = sin(a/2) n for a rotation by a about n.
 * It corresponds to the SU(2) element exp(-i a (sigma . n) / 2), i.e. the
 * product-operator convention exp(-i a I.n) with I_k = sigma_k / 2. Under
 * this convention a 90 degree rotation about x sends z to -y.
 *
 * q and -q describe the same physical rotation (they differ by a global
 * phase of -1 on the unitary) and are identified by distance_up_to_phase().
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "rotten/errors.hpp"

namespace rotten {

/// Real 3-vector of magnetization components.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr BlochVector() = default;
    constexpr BlochVector(double vx, double vy, double vz) : x{vx}, y{vy}, z{vz} {}

    [[nodiscard]] double norm() const { return std::sqrt(x * x + y * y + z * z); }
    [[nodiscard]] constexpr double dot(const BlochVector& o) const {
        return x * o.x + y * o.y + z * o.z;
    }
    [[nodiscard]] constexpr BlochVector cross(const BlochVector& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    constexpr BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr BlochVector operator-() const { return {-x, -y, -z}; }
    constexpr BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const BlochVector&) const = default;

    static constexpr BlochVector Ix() { return {1.0, 0.0, 0.0}; }
    static constexpr BlochVector Iy() { return {0.0, 1.0, 0.0}; }
    static constexpr BlochVector Iz() { return {0.0, 0.0, 1.0}; }
};

constexpr BlochVector operator*(double s, const BlochVector& v) { return v * s; }

/// Largest component-wise absolute difference.
inline double max_abs_diff(const BlochVector& a, const BlochVector& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
    std::array<Complex, 4> m{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}};

    Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    const Complex& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

    Mat2 operator*(const Mat2& o) const {
        Mat2 out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                out(r, c) = (*this)(r, 0) * o(0, c) + (*this)(r, 1) * o(1, c);
        return out;
    }
    [[nodiscard]] Mat2 adjoint() const {
        Mat2 out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) out(r, c) = std::conj((*this)(c, r));
        return out;
    }
    [[nodiscard]] Complex trace() const { return m[0] + m[3]; }
};

class Rotation {
public:
    /// Identity rotation.
    constexpr Rotation() = default;

    /// Build from raw quaternion components; the result is renormalized.
    /// Throws NormalizationError for a zero (or non-finite) quaternion.
    static Rotation from_quaternion(double w, double x, double y, double z) {
        Rotation r{w, x, y, z, RawTag{}};
        r.renormalize();
        return r;
    }

    /// exp(-i angle (sigma . axis) / 2). The axis must be unit within 1e-9.
    static Rotation from_axis_angle(const BlochVector& axis, double angle) {
        const double n = axis.norm();
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9)
            throw NormalizationError("rotation axis must be a unit vector (|axis| = " +
                                     std::to_string(n) + ")");
        const double s = std::sin(angle / 2.0) / n;
        return from_quaternion(std::cos(angle / 2.0), s * axis.x, s * axis.y, s * axis.z);
    }

    /// From an SU(2) matrix [[w - iz, -y - ix], [y - ix, w + iz]]. A U(2)
    /// input is projected onto SU(2) first (its global phase is dropped).
    static Rotation from_matrix(const Mat2& u) {
        const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
        const Complex phase = std::sqrt(det);
        if (std::abs(phase) == 0.0) throw NormalizationError("singular matrix has no rotation");
        const Complex a = u(0, 0) / phase;
        const Complex b = u(0, 1) / phase;
        const Complex c = u(1, 0) / phase;
        const Complex d = u(1, 1) / phase;
        const double w = 0.5 * (a + d).real();
        const double z = 0.5 * (d - a).imag();
        const double x = -0.5 * (b + c).imag();
        const double y = 0.5 * (c - b).real();
        return from_quaternion(w, x, y, z);
    }

    [[nodiscard]] constexpr double w() const { return w_; }
    [[nodiscard]] constexpr double x() const { return x_; }
    [[nodiscard]] constexpr double y() const { return y_; }
    [[nodiscard]] constexpr double z() const { return z_; }

    [[nodiscard]] double norm() const { return std::sqrt(w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_); }

    /// Rotation angle in [0, 2pi] about axis().
    [[nodiscard]] double angle() const {
        const double s = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
        return 2.0 * std::atan2(s, w_);
    }

    /// Unit rotation axis; x-hat for the identity.
    [[nodiscard]] BlochVector axis() const {
        const double s = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
        if (s == 0.0) return BlochVector::Ix();
        return {x_ / s, y_ / s, z_ / s};
    }

    /// Quaternion dot product (real part of Tr(B^dagger A) / 2).
    [[nodiscard]] constexpr double dot(const Rotation& o) const {
        return w_ * o.w_ + x_ * o.x_ + y_ * o.y_ + z_ * o.z_;
    }

    [[nodiscard]] constexpr Rotation inverse() const { return Rotation{w_, -x_, -y_, -z_, RawTag{}}; }
    [[nodiscard]] constexpr Rotation negated() const { return Rotation{-w_, -x_, -y_, -z_, RawTag{}}; }

    [[nodiscard]] Mat2 to_matrix() const {
        Mat2 u;
        u(0, 0) = {w_, -z_};
        u(0, 1) = {-y_, -x_};
        u(1, 0) = {y_, -x_};
        u(1, 1) = {w_, z_};
        return u;
    }

    /// Hamilton product, i.e. the matrix product (*this) * o: o acts first.
    [[nodiscard]] constexpr Rotation hamilton(const Rotation& o) const {
        return Rotation{w_ * o.w_ - x_ * o.x_ - y_ * o.y_ - z_ * o.z_,
                        w_ * o.x_ + x_ * o.w_ + y_ * o.z_ - z_ * o.y_,
                        w_ * o.y_ - x_ * o.z_ + y_ * o.w_ + z_ * o.x_,
                        w_ * o.z_ + x_ * o.y_ - y_ * o.x_ + z_ * o.w_, RawTag{}};
    }

    constexpr bool operator==(const Rotation&) const = default;

private:
    struct RawTag {};
    constexpr Rotation(double w, double x, double y, double z, RawTag)
        : w_{w}, x_{x}, y_{y}, z_{z} {}

    void renormalize() {
        const double n = norm();
        if (!std::isfinite(n) || n == 0.0)
            throw NormalizationError("quaternion has zero or non-finite norm");
        w_ /= n;
        x_ /= n;
        y_ /= n;
        z_ /= n;
    }

    double w_ = 1.0;
    double x_ = 0.0;
    double y_ = 0.0;
    double z_ = 0.0;
};

inline Rotation from_axis_angle(const BlochVector& axis, double angle) {
    return Rotation::from_axis_angle(axis, angle);
}

/// Rotation that applies `first`, then `second` (matrix product second * first).
inline Rotation compose(const Rotation& second, const Rotation& first) {
    const Rotation r = second.hamilton(first);
    return Rotation::from_quaternion(r.w(), r.x(), r.y(), r.z());
}

/// Adjoint action U (sigma . v) U^dagger expressed on the Bloch vector.
inline BlochVector apply(const Rotation& r, const BlochVector& v) {
    // v' = v + 2w (u x v) + 2 u x (u x v), u = (x, y, z)
    const BlochVector u{r.x(), r.y(), r.z()};
    const BlochVector t = 2.0 * u.cross(v);
    return v + r.w() * t + u.cross(t);
}

/// 1 - |<a, b>| (equivalently 1 - |Tr(B^dagger A)| / 2); zero iff a and b
/// agree up to global phase.
inline double distance_up_to_phase(const Rotation& a, const Rotation& b) {
    // 1 - |d| = (1 - d^2) / (1 + |d|), and for unit quaternions 1 - d^2 is the
    // sum of squared 2x2 minors, which keeps full relative precision when the
    // rotations nearly coincide.
    const std::array<double, 4> p{a.w(), a.x(), a.y(), a.z()};
    const std::array<double, 4> q{b.w(), b.x(), b.y(), b.z()};
    double minors = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            const double m = p[i] * q[j] - p[j] * q[i];
            minors += m * m;
        }
    const double d = std::abs(a.dot(b));
    return std::clamp(minors / (1.0 + d), 0.0, 1.0);
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace rotten
