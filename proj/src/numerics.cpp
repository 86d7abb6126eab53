#include "gbloch/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbloch {

EigResult eig_dense(const Eigen::MatrixXcd& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("eig_dense: matrix must be square");
  if (!H.allFinite()) throw std::invalid_argument("eig_dense: matrix has non-finite entries");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H, true);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_dense: QR iteration did not converge (n = " +
                             std::to_string(H.rows()) + ")");

  const int n = static_cast<int>(H.rows());
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });

  EigResult out;
  out.eigenvalues.resize(n);
  out.right_vectors.resize(n, n);
  out.residuals.resize(n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues(i) = ev(order[static_cast<size_t>(i)]);
    Eigen::VectorXcd v = es.eigenvectors().col(order[static_cast<size_t>(i)]);
    v.normalize();
    out.right_vectors.col(i) = v;
    out.residuals(i) = (H * v - out.eigenvalues(i) * v).norm();
  }
  return out;
}

LocalizationFit localization_fit(const Eigen::VectorXcd& v, int cells) {
  if (v.size() != 2 * cells)
    throw std::invalid_argument("localization_fit: vector length must be 2*cells");

  std::vector<double> xs, ys;
  for (int n = 1; n <= cells; ++n) {
    double env = std::max(std::abs(v(2 * (n - 1))), std::abs(v(2 * (n - 1) + 1)));
    if (env > 1e-13) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(env));
    }
  }
  if (xs.size() < 4)
    throw std::invalid_argument("localization_fit: fewer than 4 usable cells");

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;

  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / m;
  for (size_t i = 0; i < xs.size(); ++i) {
    double fit = intercept + slope * xs[i];
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return LocalizationFit{slope, r2, static_cast<int>(xs.size())};
}

JordanEstimate jordan_structure(const Eigen::MatrixXcd& H, std::complex<double> lambda,
                                double tol_cluster, double tol_rank) {
  if (H.rows() != H.cols()) throw std::invalid_argument("jordan_structure: matrix must be square");
  const int n = static_cast<int>(H.rows());
  if (tol_cluster < 0.0) tol_cluster = 1e-6 * H.norm();

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(H, false);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("jordan_structure: Schur reduction failed");

  int algebraic = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(schur.matrixT()(i, i) - lambda) <= tol_cluster) ++algebraic;
  if (algebraic == 0)
    throw std::invalid_argument(
        "jordan_structure: no eigenvalue within tol_cluster of the target");

  Eigen::MatrixXcd shifted = H - lambda * Eigen::MatrixXcd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
  const auto& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol_rank * sv(0)) ++rank;

  int geometric = n - rank;
  return JordanEstimate{lambda, algebraic, geometric,
                        geometric < algebraic ? algebraic : 1};
}

}  // namespace gbloch
