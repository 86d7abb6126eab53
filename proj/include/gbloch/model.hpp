#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace gbloch {

using cplx = std::complex<double>;

/// Sublattice index within a unit cell.
enum class Orbital : int { A = 0, B = 1 };

/// Hopping table of a generic two-band, one-dimensional tight-binding chain.
///
/// Entry (m, i, j) is the amplitude of the term moving weight from orbital j
/// of cell n to orbital i of cell n+m, for offsets |m| <= range.  The m = 0
/// entries hold the two intra-cell couplings (B->A and A->B); intra-cell
/// same-orbital terms belong to the onsite energy and are rejected.
class HoppingSpec {
 public:
  HoppingSpec(cplx onsite, int range);

  int range() const { return range_; }
  cplx onsite() const { return onsite_; }

  void set(int m, Orbital to, Orbital from, cplx amplitude);
  cplx hop(int m, Orbital to, Orbital from) const;

  /// True iff hop(-m, j, i) == conj(hop(m, i, j)) for every entry and the
  /// onsite energy is real, each within `tol`.
  bool is_hermitian(double tol = 0.0) const;

 private:
  cplx onsite_;
  int range_;
  std::vector<Eigen::Matrix2cd> blocks_;  // index m + range_
};

/// SSH chain with long-range couplings: intra-cell t0 (reciprocal),
/// nearest-cell t1R/t1L (non-reciprocal, B->A right / A->B left) and
/// range-2 t2 (reciprocal, B<->A).
struct SSHLongRangeParams {
  cplx onsite{0.0};
  cplx t0{0.0};
  cplx t1L{0.0};
  cplx t1R{0.0};
  cplx t2{0.0};
};

/// Ladder with five non-reciprocal hopping pairs: intra-cell t0L/t0R and
/// all four orbital combinations at cell offset one in both directions.
struct LadderParams {
  cplx onsite{0.0};
  cplx t0L{0.0}, t0R{0.0};
  cplx tL_AA{0.0}, tL_BB{0.0}, tL_AB{0.0}, tL_BA{0.0};
  cplx tR_AA{0.0}, tR_BB{0.0}, tR_AB{0.0}, tR_BA{0.0};
};

/// Dense open-boundary Hamiltonian.  Sites are interleaved: the (n, A)
/// orbital sits at row 2(n-1) and (n, B) at row 2(n-1)+1, n = 1..cells.
struct OpenChainMatrix {
  int cells;
  Eigen::MatrixXcd matrix;
};

/// Builds the dense 2N x 2N open-chain matrix.  Requires N >= 2*range + 2 so
/// that a nonempty bulk region exists.
OpenChainMatrix build_open_chain(const HoppingSpec& spec, int cells);

HoppingSpec ssh_to_spec(const SSHLongRangeParams& p);
HoppingSpec ladder_to_spec(const LadderParams& p);

/// 2x2 Bloch matrix H(k)[i][j] = sum_m hop(m,i,j) e^{-i m k} + onsite * I.
Eigen::Matrix2cd build_bloch(const HoppingSpec& spec, double k);

}  // namespace gbloch
