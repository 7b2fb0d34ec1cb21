#include "socindex/pools.hpp"

#include <cmath>
#include <string>

#include "socindex/errors.hpp"

namespace socindex {

PoolVector::PoolVector(const Vec4& c) : c_(c) {
  for (int i = 0; i < kPools; ++i) {
    if (!std::isfinite(c[i]) || c[i] < 0.0) {
      throw DomainError("pool " + std::to_string(i) +
                        " must be finite and non-negative, got " +
                        std::to_string(c[i]));
    }
  }
}

PartitionFractions build_partition_fractions(double clay_pct) {
  if (!(clay_pct >= 0.0 && clay_pct <= 100.0)) {
    throw DomainError("clay content must lie in [0, 100] %, got " +
                      std::to_string(clay_pct));
  }
  PartitionFractions f{};
  f.texture = 1.67 * (1.85 + 1.60 * std::exp(-0.0786 * clay_pct));
  f.alpha = 0.46 / (f.texture + 1.0);
  f.beta = 1.0 / (f.texture + 1.0) - f.alpha;
  f.delta = 1.0 - f.alpha - f.beta;
  return f;
}

Vec4 default_rate_constants(double months_per_year) {
  if (!(months_per_year > 0.0) || !std::isfinite(months_per_year)) {
    throw DomainError("year length must be positive, got " +
                      std::to_string(months_per_year));
  }
  return Vec4(10.0, 0.3, 0.66, 0.02) / months_per_year;
}

SoilParams SoilParams::make(double clay_pct, double depth_cm, double dpm_rpm_ratio,
                            double eta, double months_per_year) {
  if (!(depth_cm > 0.0)) {
    throw DomainError("soil depth must be positive, got " + std::to_string(depth_cm));
  }
  if (!(eta >= 0.0 && eta <= 0.5)) {
    throw DomainError("eta must lie in [0, 1/2], got " + std::to_string(eta));
  }
  SoilParams p;
  p.clay_ = clay_pct;
  p.depth_ = depth_cm;
  p.T_ = months_per_year;
  p.k_ = default_rate_constants(months_per_year);
  p.frac_ = build_partition_fractions(clay_pct);
  p.eta_ = eta;
  return p.with_ratio(dpm_rpm_ratio);
}

SoilParams SoilParams::with_ratio(double dpm_rpm_ratio) const {
  if (!(dpm_rpm_ratio >= 0.0) || !std::isfinite(dpm_rpm_ratio)) {
    throw DomainError("DPM/RPM ratio must be finite and >= 0, got " +
                      std::to_string(dpm_rpm_ratio));
  }
  SoilParams p = *this;
  p.r_ = dpm_rpm_ratio;
  p.gamma_ = dpm_rpm_ratio / (dpm_rpm_ratio + 1.0);
  return p;
}

CompartmentMatrices build_matrices(const SoilParams& params) {
  const Vec4& k = params.k();
  const double a = params.alpha();
  const double b = params.beta();

  CompartmentMatrices m;
  m.k = k;
  m.delta = params.delta();
  m.D = k.asDiagonal();

  m.Lambda = Mat4::Zero();
  m.Lambda.row(2).setConstant(a);
  m.Lambda.row(3).setConstant(b);

  m.A << -k[0], 0.0, 0.0, 0.0,
         0.0, -k[1], 0.0, 0.0,
         a * k[0], a * k[1], (a - 1.0) * k[2], a * k[3],
         b * k[0], b * k[1], b * k[2], (b - 1.0) * k[3];

  m.I_minus_Lambda = Mat4::Identity() - m.Lambda;
  // Lambda^2 = (alpha + beta) Lambda, so (I - Lambda)^-1 = I + Lambda / delta.
  m.I_minus_Lambda_inv = Mat4::Identity() + m.Lambda / m.delta;
  m.Atilde = m.A * m.I_minus_Lambda_inv;

  const double g = params.gamma();
  const double e = params.eta();
  m.a_g = Vec4(g, 1.0 - g, 0.0, 0.0);
  m.a_f = Vec4(e, e, 0.0, 1.0 - 2.0 * e);
  return m;
}

}  // namespace socindex
