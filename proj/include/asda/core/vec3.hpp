#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace asda {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

  constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0.0 ? *this / n : Vec3{0, 0, 0};
  }
  constexpr Vec3 cwise_mul(const Vec3& o) const { return {x * o.x, y * o.y, z * o.z}; }

  double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

  bool all_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
  static Vec3 min(const Vec3& a, const Vec3& b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
  }
  static Vec3 max(const Vec3& a, const Vec3& b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
  }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Column-major-free 3x3: m[r][c].
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  static Mat3 identity() { return Mat3{}; }

  static Mat3 scale(const Vec3& s) {
    Mat3 r;
    r.m = {{{s.x, 0, 0}, {0, s.y, 0}, {0, 0, s.z}}};
    return r;
  }
  static Mat3 rot_x(double a) {
    double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {{{1, 0, 0}, {0, c, -s}, {0, s, c}}};
    return r;
  }
  static Mat3 rot_y(double a) {
    double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}};
    return r;
  }
  static Mat3 rot_z(double a) {
    double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
    return r;
  }

  Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }
  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  double det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
  Mat3 inverse() const {
    double d = det();
    Mat3 r;
    double id = 1.0 / d;
    r.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * id;
    r.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * id;
    r.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * id;
    r.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * id;
    r.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * id;
    r.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * id;
    r.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * id;
    r.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * id;
    r.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * id;
    return r;
  }
  Vec3 col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }
};

// Scene-node rotation convention: intrinsic Euler, R = Rz * Ry * Rx, radians.
inline Mat3 euler_zyx(const Vec3& e) {
  return Mat3::rot_z(e.z) * Mat3::rot_y(e.y) * Mat3::rot_x(e.x);
}

// Affine map p -> linear*p + t.
struct Affine {
  Mat3 linear;
  Vec3 t;

  static Affine identity() { return {Mat3::identity(), {0, 0, 0}}; }
  static Affine trs(const Vec3& translation, const Vec3& euler, const Vec3& scale) {
    return {euler_zyx(euler) * Mat3::scale(scale), translation};
  }

  Vec3 apply(const Vec3& p) const { return linear * p + t; }
  // this after other: (this ∘ other)(p) = this(other(p))
  Affine compose(const Affine& other) const {
    return {linear * other.linear, linear * other.t + t};
  }
  Affine inverse() const {
    Mat3 li = linear.inverse();
    return {li, -(li * t)};
  }
};

struct Aabb {
  Vec3 min{0, 0, 0};
  Vec3 max{0, 0, 0};

  bool valid() const {
    return min.all_finite() && max.all_finite() &&
           min.x <= max.x && min.y <= max.y && min.z <= max.z;
  }
  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  double bounding_radius() const { return extent().norm() * 0.5; }
  std::array<Vec3, 8> corners() const {
    return {Vec3{min.x, min.y, min.z}, Vec3{max.x, min.y, min.z},
            Vec3{min.x, max.y, min.z}, Vec3{max.x, max.y, min.z},
            Vec3{min.x, min.y, max.z}, Vec3{max.x, min.y, max.z},
            Vec3{min.x, max.y, max.z}, Vec3{max.x, max.y, max.z}};
  }
  // AABB of this box pushed through an affine map.
  Aabb transformed(const Affine& a) const {
    Aabb r;
    bool first = true;
    for (const Vec3& c : corners()) {
      Vec3 w = a.apply(c);
      if (first) {
        r.min = r.max = w;
        first = false;
      } else {
        r.min = Vec3::min(r.min, w);
        r.max = Vec3::max(r.max, w);
      }
    }
    return r;
  }
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace asda
