#include <doctest.h>

#include <numbers>
#include <random>

#include "gbloch/model.hpp"

using namespace gbloch;

namespace {

SSHLongRangeParams fig2_params() { return {0.0, 1.0, 2.5, 3.5, 1.3}; }

HoppingSpec random_spec(std::mt19937& rng, bool hermitian) {
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  std::uniform_int_distribution<int> range(1, 3);
  const int M = range(rng);
  HoppingSpec spec(hermitian ? cplx(amp(rng), 0.0) : cplx(amp(rng), amp(rng)), M);
  for (int m = -M; m <= M; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (m == 0 && i == j) continue;
        if (hermitian && m < 0) continue;
        if (hermitian && m == 0 && i > j) continue;
        spec.set(m, static_cast<Orbital>(i), static_cast<Orbital>(j),
                 cplx(amp(rng), amp(rng)));
      }
  if (hermitian) {
    for (int m = 0; m <= M; ++m)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (m == 0 && i >= j) continue;
          cplx t = spec.hop(m, static_cast<Orbital>(i), static_cast<Orbital>(j));
          spec.set(-m, static_cast<Orbital>(j), static_cast<Orbital>(i), std::conj(t));
        }
  }
  return spec;
}

}  // namespace

TEST_CASE("open chain reproduces the long-range SSH coupling pattern") {
  OpenChainMatrix H = build_open_chain(ssh_to_spec(fig2_params()), 4);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(8, 8);
  for (int n = 1; n <= 4; ++n) {
    expect(2 * n - 2, 2 * n - 1) = 1.0;
    expect(2 * n - 1, 2 * n - 2) = 1.0;
  }
  for (int n = 1; n <= 3; ++n) {
    expect(2 * n, 2 * n - 1) = 3.5;   // site (2n+1, 2n) in 1-based indexing
    expect(2 * n - 1, 2 * n) = 2.5;
  }
  for (int n = 1; n <= 2; ++n) {
    expect(2 * n + 2, 2 * n - 1) = 1.3;
    expect(2 * n - 1, 2 * n + 2) = 1.3;
  }
  CHECK((H.matrix - expect).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("open chain of an empty model is the zero matrix") {
  HoppingSpec spec(0.0, 1);
  OpenChainMatrix H = build_open_chain(spec, 4);
  CHECK(H.matrix.norm() == 0.0);
}

TEST_CASE("reciprocal real couplings give a Hermitian matrix") {
  SSHLongRangeParams p{0.0, 1.0, 2.5, 2.5, 1.3};
  HoppingSpec spec = ssh_to_spec(p);
  CHECK(spec.is_hermitian());
  OpenChainMatrix H = build_open_chain(spec, 8);
  CHECK((H.matrix - H.matrix.adjoint()).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("single-cell chains are rejected") {
  HoppingSpec spec = ssh_to_spec(fig2_params());
  CHECK_THROWS_WITH_AS(build_open_chain(spec, 1),
                       doctest::Contains("at least 2"), std::invalid_argument);
}

TEST_CASE("intra-cell same-orbital hops are rejected") {
  HoppingSpec spec(0.0, 1);
  CHECK_THROWS_AS(spec.set(0, Orbital::A, Orbital::A, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(spec.set(2, Orbital::A, Orbital::B, 1.0), std::invalid_argument);
}

TEST_CASE("hermiticity predicate matches the built matrix") {
  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 50; ++trial) {
    bool herm = trial % 2 == 0;
    HoppingSpec spec = random_spec(rng, herm);
    OpenChainMatrix H = build_open_chain(spec, 9);
    bool matrix_herm = (H.matrix - H.matrix.adjoint()).norm() < 1e-12;
    CHECK(spec.is_hermitian(1e-12) == matrix_herm);
  }
}

TEST_CASE("ssh_to_spec places the paper couplings") {
  SSHLongRangeParams p = fig2_params();
  HoppingSpec spec = ssh_to_spec(p);
  CHECK_FALSE(spec.is_hermitian(1e-12));
  CHECK(spec.hop(1, Orbital::A, Orbital::B) == cplx(3.5));
  CHECK(spec.hop(-1, Orbital::B, Orbital::A) == cplx(2.5));
  CHECK(spec.hop(2, Orbital::A, Orbital::B) == cplx(1.3));
  CHECK(spec.hop(-2, Orbital::B, Orbital::A) == cplx(1.3));
  CHECK(spec.hop(0, Orbital::A, Orbital::B) == cplx(1.0));
  CHECK(spec.hop(-1, Orbital::A, Orbital::B) == cplx(0.0));

  SSHLongRangeParams q{0.0, 1.0, 2.5, 3.5, 1.0};  // t0 = t2, still non-reciprocal
  CHECK_FALSE(ssh_to_spec(q).is_hermitian(1e-12));
}

TEST_CASE("bloch matrix matches the closed-form symbol at t0 = t2") {
  SSHLongRangeParams p{0.0, 1.0, 2.5, 3.5, 1.0};
  HoppingSpec spec = ssh_to_spec(p);

  Eigen::Matrix2cd H0 = build_bloch(spec, 0.0);
  CHECK(H0(0, 1).real() == doctest::Approx(5.5).epsilon(1e-14));
  CHECK(H0(1, 0).real() == doctest::Approx(4.5).epsilon(1e-14));

  Eigen::Matrix2cd Hpi = build_bloch(spec, std::numbers::pi);
  CHECK(Hpi(0, 1).real() == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(Hpi(1, 0).real() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::abs(Hpi(0, 1).imag()) < 1e-12);

  // General check against e^{-ik}(t1R + 2 t0 cos k), e^{+ik}(t1L + 2 t0 cos k).
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> kd(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 20; ++i) {
    double k = kd(rng);
    Eigen::Matrix2cd H = build_bloch(spec, k);
    cplx ha = std::exp(cplx(0, -k)) * (3.5 + 2.0 * std::cos(k));
    cplx hb = std::exp(cplx(0, k)) * (2.5 + 2.0 * std::cos(k));
    CHECK(std::abs(H(0, 1) - ha) < 1e-12);
    CHECK(std::abs(H(1, 0) - hb) < 1e-12);
  }
}

TEST_CASE("hermitian specs give Hermitian Bloch matrices") {
  std::mt19937 rng(99);
  HoppingSpec spec = random_spec(rng, true);
  std::uniform_real_distribution<double> kd(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 20; ++i) {
    Eigen::Matrix2cd H = build_bloch(spec, kd(rng));
    CHECK((H - H.adjoint()).norm() < 1e-13);
  }
}

TEST_CASE("bloch symbol acts as the periodic chain on plane waves") {
  std::mt19937 rng(5150);
  HoppingSpec spec = random_spec(rng, false);
  const int N = 8;
  const int M = spec.range();

  // Periodic-boundary matrix: same couplings with wrap-around indices.
  Eigen::MatrixXcd Hp = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  for (int l = 0; l < 2 * N; ++l) Hp(l, l) = spec.onsite();
  for (int m = -M; m <= M; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        cplx t = spec.hop(m, static_cast<Orbital>(i), static_cast<Orbital>(j));
        if (t == 0.0) continue;
        for (int n = 0; n < N; ++n) {
          int dst = ((n + m) % N + N) % N;
          Hp(2 * dst + i, 2 * n + j) += t;
        }
      }

  for (int jk = 0; jk < N; ++jk) {
    double k = 2.0 * std::numbers::pi * jk / N;
    Eigen::Matrix2cd Hk = build_bloch(spec, k);
    for (int orb = 0; orb < 2; ++orb) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * N);
      for (int n = 0; n < N; ++n) v(2 * n + orb) = std::exp(cplx(0, k * n));
      Eigen::VectorXcd lhs = Hp * v;
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * N);
      for (int n = 0; n < N; ++n)
        for (int i = 0; i < 2; ++i) rhs(2 * n + i) = Hk(i, orb) * std::exp(cplx(0, k * n));
      CHECK((lhs - rhs).norm() < 1e-11 * rhs.norm());
    }
  }
}

TEST_CASE("decoupled ladder dimers have the two-level spectrum") {
  LadderParams p;
  p.onsite = 0.25;
  p.t0L = 1.0;
  p.t0R = 0.5;
  OpenChainMatrix H = build_open_chain(ladder_to_spec(p), 6);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H.matrix);
  const cplx shift = std::sqrt(cplx(0.5));
  int plus = 0, minus = 0;
  for (int i = 0; i < 12; ++i) {
    cplx e = es.eigenvalues()(i);
    if (std::abs(e - (p.onsite + shift)) < 1e-10) ++plus;
    if (std::abs(e - (p.onsite - shift)) < 1e-10) ++minus;
  }
  CHECK(plus == 6);
  CHECK(minus == 6);
}

TEST_CASE("reciprocal ladder passes the hermiticity predicate") {
  // Both hop superscripts name (right-cell orbital, left-cell orbital), so
  // the Hermitian pairing is tL equal to conj(tR) with matching indices.
  LadderParams p;
  p.t0L = 0.7;
  p.t0R = 0.7;
  p.tL_AA = 1.2;
  p.tR_AA = 1.2;
  p.tL_BB = 0.6;
  p.tR_BB = 0.6;
  p.tL_AB = 0.5;
  p.tR_AB = 0.5;
  p.tL_BA = 3.0;
  p.tR_BA = 3.0;
  CHECK(ladder_to_spec(p).is_hermitian(1e-14));
  OpenChainMatrix H = build_open_chain(ladder_to_spec(p), 6);
  CHECK((H.matrix - H.matrix.adjoint()).norm() < 1e-14);

  p.tL_AB = 0.4;  // break one pair
  CHECK_FALSE(ladder_to_spec(p).is_hermitian(1e-14));
}
