#pragma once

#include "socindex/linalg.hpp"

namespace socindex {

/// Four active carbon pools (t C/ha). Physical states are non-negative;
/// use a plain Vec4 for normalized delta states, which may change sign.
class PoolVector {
 public:
  PoolVector() : c_(Vec4::Zero()) {}
  /// Throws DomainError on negative or non-finite components.
  explicit PoolVector(const Vec4& c);
  PoolVector(double dpm, double rpm, double bio, double hum)
      : PoolVector(Vec4(dpm, rpm, bio, hum)) {}

  double dpm() const { return c_[0]; }
  double rpm() const { return c_[1]; }
  double bio() const { return c_[2]; }
  double hum() const { return c_[3]; }
  double total() const { return c_.sum(); }
  const Vec4& values() const { return c_; }

 private:
  Vec4 c_;
};

struct PartitionFractions {
  double texture;  // soil texture factor x
  double alpha;    // fraction of decomposed carbon going to BIO
  double beta;     // fraction going to HUM
  double delta;    // fraction lost as CO2
};

/// Clay-driven split of decomposed carbon. Clay in percent, [0, 100].
PartitionFractions build_partition_fractions(double clay_pct);

/// Published RothC decomposition constants scaled to a year of
/// `months_per_year` time units.
Vec4 default_rate_constants(double months_per_year);

inline constexpr double kDefaultEta = 0.49;
inline constexpr double kMonthsPerYear = 12.0;

/// Soil parameterization. gamma is derived from the DPM/RPM ratio and
/// cached; changing the ratio yields a new object.
class SoilParams {
 public:
  static SoilParams make(double clay_pct, double depth_cm, double dpm_rpm_ratio,
                         double eta = kDefaultEta,
                         double months_per_year = kMonthsPerYear);

  SoilParams with_ratio(double dpm_rpm_ratio) const;

  double clay() const { return clay_; }
  double depth() const { return depth_; }
  double months_per_year() const { return T_; }
  const Vec4& k() const { return k_; }
  double alpha() const { return frac_.alpha; }
  double beta() const { return frac_.beta; }
  double delta() const { return frac_.delta; }
  double ratio() const { return r_; }
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }

 private:
  SoilParams() = default;
  double clay_ = 0, depth_ = 0, T_ = kMonthsPerYear;
  Vec4 k_ = Vec4::Zero();
  PartitionFractions frac_{};
  double r_ = 0, gamma_ = 0, eta_ = kDefaultEta;
};

/// Constant operators of the linear pool dynamics dc/dt = rho A c + b.
struct CompartmentMatrices {
  Mat4 A;
  Mat4 Lambda;
  Mat4 D;
  Mat4 Atilde;          // A (I - Lambda)^-1
  Mat4 I_minus_Lambda;
  Mat4 I_minus_Lambda_inv;
  Vec4 a_g;             // plant input direction
  Vec4 a_f;             // manure input direction
  Vec4 k;
  double delta = 0;
};

/// d a_g / d r scaled by (r+1)^2.
inline Vec4 ratio_direction() { return Vec4(1.0, -1.0, 0.0, 0.0); }

CompartmentMatrices build_matrices(const SoilParams& params);

}  // namespace socindex
