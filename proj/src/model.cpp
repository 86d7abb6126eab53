#include "gbloch/model.hpp"

#include <cmath>
#include <string>

namespace gbloch {

HoppingSpec::HoppingSpec(cplx onsite, int range) : onsite_(onsite), range_(range) {
  if (range < 1) throw std::invalid_argument("HoppingSpec: range must be >= 1");
  blocks_.assign(2 * range + 1, Eigen::Matrix2cd::Zero());
}

void HoppingSpec::set(int m, Orbital to, Orbital from, cplx amplitude) {
  if (std::abs(m) > range_)
    throw std::invalid_argument("HoppingSpec: offset " + std::to_string(m) +
                                " exceeds range " + std::to_string(range_));
  if (m == 0 && to == from)
    throw std::invalid_argument(
        "HoppingSpec: intra-cell same-orbital terms belong to the onsite energy");
  blocks_[m + range_](static_cast<int>(to), static_cast<int>(from)) = amplitude;
}

cplx HoppingSpec::hop(int m, Orbital to, Orbital from) const {
  if (std::abs(m) > range_) return 0.0;
  return blocks_[m + range_](static_cast<int>(to), static_cast<int>(from));
}

bool HoppingSpec::is_hermitian(double tol) const {
  if (std::abs(onsite_.imag()) > tol) return false;
  for (int m = -range_; m <= range_; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        cplx fwd = blocks_[m + range_](i, j);
        cplx rev = blocks_[-m + range_](j, i);
        if (std::abs(rev - std::conj(fwd)) > tol) return false;
      }
  return true;
}

OpenChainMatrix build_open_chain(const HoppingSpec& spec, int cells) {
  // Any chain of two or more cells builds; the stronger bulk-window bound
  // 2*range + 2 is enforced by the solvers that need a nonempty bulk.
  if (cells < 2)
    throw std::invalid_argument("build_open_chain: need at least 2 cells (got " +
                                std::to_string(cells) + ")");
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * cells, 2 * cells);
  for (int l = 0; l < 2 * cells; ++l) H(l, l) = spec.onsite();
  for (int m = -spec.range(); m <= spec.range(); ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        cplx t = spec.hop(m, static_cast<Orbital>(i), static_cast<Orbital>(j));
        if (t == 0.0) continue;
        for (int n = 1; n <= cells; ++n) {
          int src = n, dst = n + m;
          if (dst < 1 || dst > cells) continue;
          H(2 * (dst - 1) + i, 2 * (src - 1) + j) += t;
        }
      }
  return OpenChainMatrix{cells, std::move(H)};
}

HoppingSpec ssh_to_spec(const SSHLongRangeParams& p) {
  HoppingSpec spec(p.onsite, 2);
  spec.set(0, Orbital::A, Orbital::B, p.t0);
  spec.set(0, Orbital::B, Orbital::A, p.t0);
  spec.set(1, Orbital::A, Orbital::B, p.t1R);
  spec.set(-1, Orbital::B, Orbital::A, p.t1L);
  spec.set(2, Orbital::A, Orbital::B, p.t2);
  spec.set(-2, Orbital::B, Orbital::A, p.t2);
  return spec;
}

HoppingSpec ladder_to_spec(const LadderParams& p) {
  HoppingSpec spec(p.onsite, 1);
  spec.set(0, Orbital::A, Orbital::B, p.t0L);
  spec.set(0, Orbital::B, Orbital::A, p.t0R);
  // Rightward hops t_R^{ij} move (n, j) -> (n+1, i).
  spec.set(1, Orbital::A, Orbital::A, p.tR_AA);
  spec.set(1, Orbital::A, Orbital::B, p.tR_AB);
  spec.set(1, Orbital::B, Orbital::A, p.tR_BA);
  spec.set(1, Orbital::B, Orbital::B, p.tR_BB);
  // Leftward hops t_L^{ij} move (n+1, i) -> (n, j).
  spec.set(-1, Orbital::A, Orbital::A, p.tL_AA);
  spec.set(-1, Orbital::B, Orbital::A, p.tL_AB);
  spec.set(-1, Orbital::A, Orbital::B, p.tL_BA);
  spec.set(-1, Orbital::B, Orbital::B, p.tL_BB);
  return spec;
}

Eigen::Matrix2cd build_bloch(const HoppingSpec& spec, double k) {
  Eigen::Matrix2cd H = spec.onsite() * Eigen::Matrix2cd::Identity();
  for (int m = -spec.range(); m <= spec.range(); ++m) {
    cplx phase = std::exp(cplx(0.0, -m * k));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        H(i, j) += spec.hop(m, static_cast<Orbital>(i), static_cast<Orbital>(j)) * phase;
  }
  return H;
}

}  // namespace gbloch
