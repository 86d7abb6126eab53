#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gbloch {

/// Full eigendecomposition of a dense complex matrix.  Eigenvalues are
/// sorted lexicographically by (real, imag); right eigenvectors are the
/// matching unit-norm columns.  Per-pair residuals ||H v - lambda v|| are
/// reported, not guaranteed: near-defective matrices can make eigenvectors
/// meaningless even though the Schur form is backward stable.
struct EigResult {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right_vectors;
  Eigen::VectorXd residuals;
};

EigResult eig_dense(const Eigen::MatrixXcd& H);

/// Least-squares slope of log(per-cell envelope) against the cell index.
struct LocalizationFit {
  double alpha;
  double r2;
  int cells_used;
};

/// Fits the localization exponent of a state on an interleaved two-orbital
/// chain.  The envelope of cell n is max(|v_{n,A}|, |v_{n,B}|); cells below
/// 1e-13 are skipped; at least four usable cells are required.
LocalizationFit localization_fit(const Eigen::VectorXcd& v, int cells);

/// Jordan-structure estimate around one eigenvalue cluster.
struct JordanEstimate {
  std::complex<double> eigenvalue;
  int algebraic;   // eigenvalues within tol_cluster of the target
  int geometric;   // dim - numerical rank of (H - lambda I)
  int ep_order;    // algebraic when geometric < algebraic, else 1
};

/// tol_cluster < 0 selects the default 1e-6 * ||H||_F.  Defective clusters
/// of order m scatter numerically like eps^(1/m); callers probing such
/// points must widen tol_cluster accordingly (half the distance to the
/// nearest distinct eigenvalue is a practical choice).
JordanEstimate jordan_structure(const Eigen::MatrixXcd& H, std::complex<double> lambda,
                                double tol_cluster = -1.0, double tol_rank = 1e-8);

}  // namespace gbloch
