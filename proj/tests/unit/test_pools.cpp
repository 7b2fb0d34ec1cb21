#include <cmath>
#include <random>

#include "doctest.h"
#include "socindex/errors.hpp"
#include "socindex/pools.hpp"

using namespace socindex;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("pool vector rejects negative and non-finite components") {
  CHECK_THROWS_AS(PoolVector(1.0, -1e-3, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(PoolVector(1.0, std::nan(""), 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(PoolVector(1.0, INFINITY, 0.0, 0.0), DomainError);
  const PoolVector c(1.0, 2.0, 3.0, 4.0);
  CHECK(c.total() == 10.0);
  CHECK(c.hum() == 4.0);
}

TEST_CASE("partition fractions at the test site") {
  // Independent evaluation of the three texture formulas.
  const double x = 1.67 * (1.85 + 1.60 * std::exp(-0.0786 * 50.0));
  const double alpha = 0.46 / (x + 1.0);
  const double beta = 1.0 / (x + 1.0) - alpha;
  const auto f = build_partition_fractions(50.0);
  CHECK(rel(f.texture, x) < 1e-15);
  CHECK(rel(f.alpha, alpha) < 1e-15);
  CHECK(rel(f.beta, beta) < 1e-15);
  CHECK(std::abs(f.delta - (1.0 - alpha - beta)) < 1e-15);
}

TEST_CASE("partition fractions over the clay range") {
  for (double cly = 0.0; cly <= 100.0; cly += 0.5) {
    const auto f = build_partition_fractions(cly);
    CHECK(std::abs(f.alpha + f.beta - 1.0 / (f.texture + 1.0)) < 1e-15);
    CHECK(f.delta > 0.0);
    CHECK(f.delta < 1.0);
  }
  CHECK_THROWS_AS(build_partition_fractions(-1.0), DomainError);
  CHECK_THROWS_AS(build_partition_fractions(100.5), DomainError);
}

TEST_CASE("rate constants") {
  const Vec4 k12 = default_rate_constants(12.0);
  const double expect[] = {10.0 / 12, 0.3 / 12, 0.66 / 12, 0.02 / 12};
  for (int i = 0; i < 4; ++i) CHECK(rel(k12[i], expect[i]) < 1e-15);
  const Vec4 k1 = default_rate_constants(1.0);
  CHECK(k1 == Vec4(10.0, 0.3, 0.66, 0.02));
  for (double T : {0.5, 1.0, 12.0, 365.0}) {
    const Vec4 k = default_rate_constants(T);
    CHECK(k.minCoeff() > 0.0);
    CHECK(k.maxCoeff() == k[0]);
  }
  CHECK_THROWS_AS(default_rate_constants(0.0), DomainError);
}

TEST_CASE("soil parameter validation") {
  CHECK_THROWS_AS(SoilParams::make(50, 23, -0.1), DomainError);
  CHECK_THROWS_AS(SoilParams::make(50, 0, 1.0), DomainError);
  CHECK_THROWS_AS(SoilParams::make(50, 23, 1.0, 0.6), DomainError);
  const auto p = SoilParams::make(50, 23, 1.44);
  CHECK(std::abs(p.gamma() - 1.44 / 2.44) < 1e-15);
  CHECK(p.with_ratio(0.25).ratio() == 0.25);
  CHECK(p.with_ratio(0.25).clay() == 50.0);
}

TEST_CASE("compartment matrix identities on random parameters") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> clay(0.0, 100.0), ratio(0.0, 50.0), eta(0.0, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = SoilParams::make(clay(rng), 23.0, ratio(rng), eta(rng));
    const auto m = build_matrices(p);
    // 1^T A = -delta k^T
    const Vec4 colsum = m.A.colwise().sum().transpose();
    CHECK((colsum + m.delta * m.k).cwiseAbs().maxCoeff() < 1e-15);
    // Two constructions of Atilde.
    const Mat4 alt = -m.I_minus_Lambda * m.D * m.I_minus_Lambda.inverse();
    CHECK((m.Atilde - alt).norm() <= 1e-12 * alt.norm());
    CHECK(std::abs(m.a_g.sum() - 1.0) < 1e-15);
    CHECK(std::abs(m.a_f.sum() - 1.0) < 1e-15);
    CHECK(rel(m.I_minus_Lambda.determinant(), m.delta) < 1e-12);
    CHECK((m.I_minus_Lambda * m.I_minus_Lambda_inv - Mat4::Identity()).norm() < 1e-13);
    CHECK(m.a_g[0] == doctest::Approx(p.gamma()).epsilon(1e-15));
  }
}

TEST_CASE("decomposition matrix assembled from pool fluxes") {
  const auto p = SoilParams::make(50, 23, 1.44);
  const auto m = build_matrices(p);
  // Pool j loses k_j; alpha k_j lands in BIO and beta k_j in HUM.
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      double expect = i == j ? -m.k[j] : 0.0;
      if (i == 2) expect += p.alpha() * m.k[j];
      if (i == 3) expect += p.beta() * m.k[j];
      CHECK(std::abs(m.A(i, j) - expect) < 1e-16);
    }
  }
}
