#pragma once

#include <Eigen/Dense>

namespace socindex {

// Pool ordering throughout: DPM, RPM, BIO, HUM.
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

inline constexpr int kPools = 4;

inline Vec4 ones4() { return Vec4::Ones(); }

}  // namespace socindex
