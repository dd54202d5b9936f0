#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace conesurf {

using Vec2 = Eigen::Vector2d;

// Proper rigid planar motion p -> R(angle) p + t. All chart transitions in the
// complex are orientation preserving; reflections never appear at this level.
struct RigidMotion {
  Eigen::Rotation2Dd rot{0.0};
  Vec2 t{0.0, 0.0};

  static RigidMotion identity() { return {}; }

  Vec2 operator()(const Vec2& p) const { return rot * p + t; }
  Vec2 applyDir(const Vec2& d) const { return rot * d; }

  // this after other: (this*other)(p) == this(other(p))
  RigidMotion operator*(const RigidMotion& o) const {
    RigidMotion m;
    m.rot = rot * o.rot;
    m.t = rot * o.t + t;
    return m;
  }

  RigidMotion inverse() const {
    RigidMotion m;
    m.rot = rot.inverse();
    m.t = -(m.rot * t);
    return m;
  }

  double angle() const { return rot.angle(); }
};

// Motion taking directed segment (b0 -> b1) onto (a1 -> a0), i.e. the two
// segments coincide with opposite orientations. Requires equal lengths.
inline RigidMotion motionMatchingOpposite(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const Vec2 da = a0 - a1;
  const Vec2 db = b1 - b0;
  const double phi = std::atan2(da.y(), da.x()) - std::atan2(db.y(), db.x());
  RigidMotion m;
  m.rot = Eigen::Rotation2Dd(phi);
  m.t = a1 - m.rot * b0;
  return m;
}

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// CCW angle in [0, 2*pi) from u to v.
inline double ccwAngle(const Vec2& u, const Vec2& v) {
  double a = std::atan2(cross2(u, v), u.dot(v));
  if (a < 0) a += 2.0 * EIGEN_PI;
  return a;
}

inline Vec2 dirOfAngle(double a) { return Vec2(std::cos(a), std::sin(a)); }

inline double normalizeAngle(double a) {
  const double twoPi = 2.0 * EIGEN_PI;
  a = std::fmod(a, twoPi);
  if (a < 0) a += twoPi;
  return a;
}

}  // namespace conesurf
