#include "gbloch/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "gbloch/polynomial.hpp"

namespace gbloch {

namespace {

constexpr double kPi = std::numbers::pi;

struct Omegas {
  cplx w0, w1, w3;
};

Omegas ssh_omegas(const SSHLongRangeParams& p) {
  return {p.t0 * p.t2, -(p.t0 * p.t1L + p.t1R * p.t2), -(p.t0 * p.t1R + p.t1L * p.t2)};
}

bool nearly_real(cplx v) { return std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v.real())); }

bool real_hoppings(const SSHLongRangeParams& p) {
  return nearly_real(p.t0) && nearly_real(p.t1L) && nearly_real(p.t1R) && nearly_real(p.t2);
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < kPi))
    throw std::invalid_argument("theta must lie in the open interval (0, pi)");
}

// z^n scaled by |z|^{-a}, evaluated in polar form to keep growing roots
// representable over a whole chain.
cplx pw(cplx z, double n, double a) {
  double r = std::abs(z);
  if (r == 0.0) return 0.0;
  return std::polar(std::pow(r, n - a), std::arg(z) * n);
}

cplx sqrt_main(cplx v) { return std::sqrt(v); }

// E_pm = onsite +- sqrt_term with alpha = 0 (no-skin branch), from the
// Vieta relations with the conjugate pair on the unit circle.
cplx sqrt_term_alpha0(const SSHLongRangeParams& p, double theta) {
  Omegas w = ssh_omegas(p);
  double c = std::cos(theta);
  cplx coshlam = w.w1 / (2.0 * w.w0) - c;
  cplx e2 = p.t0 * p.t0 + p.t1L * p.t1R + p.t2 * p.t2 - w.w0 * (2.0 + 4.0 * c * coshlam);
  return sqrt_main(e2);
}

struct Validated {
  BandPoint bp;
};

// Validates one (alpha, sqrt_term) candidate against the characteristic
// quartic: the conjugate pair must be roots and must be the middle-modulus
// pair, with both remaining roots separated from e^alpha by tol_sep.
std::optional<BandPoint> validate_deg4(const SSHLongRangeParams& p, double theta,
                                       double alpha, cplx s, const GbtOptions& opts) {
  CharPoly cp;
  try {
    cp = charpoly_ssh(p, p.onsite + s);
  } catch (const degenerate_polynomial&) {
    return std::nullopt;
  }
  const double ealpha = std::exp(alpha);
  const cplx z1 = std::polar(ealpha, theta);
  const cplx z2 = std::polar(ealpha, -theta);
  const double bound =
      opts.tol_root * std::max(1.0, cp.scale()) * std::pow(std::max(1.0, ealpha), 4);
  if (std::abs(cp.eval(z1)) > bound || std::abs(cp.eval(z2)) > bound) return std::nullopt;

  RootSet rs = roots(cp, std::max(opts.tol_root, 1e-8));
  std::vector<cplx> rest = rs.roots;
  for (cplx target : {z1, z2}) {
    size_t best = 0;
    double dist = std::numeric_limits<double>::max();
    for (size_t i = 0; i < rest.size(); ++i) {
      double d = std::abs(rest[i] - target);
      if (d < dist) {
        dist = d;
        best = i;
      }
    }
    rest.erase(rest.begin() + static_cast<long>(best));
  }
  if (rest.size() != 2) return std::nullopt;
  double lo = std::min(std::abs(rest[0]), std::abs(rest[1]));
  double hi = std::max(std::abs(rest[0]), std::abs(rest[1]));
  if (!(lo < ealpha - opts.tol_sep && hi > ealpha + opts.tol_sep)) return std::nullopt;

  BandPoint bp;
  bp.alpha = alpha;
  bp.sqrt_term = s;
  bp.z = {z1, z2, std::abs(rest[0]) <= std::abs(rest[1]) ? rest[0] : rest[1],
          std::abs(rest[0]) <= std::abs(rest[1]) ? rest[1] : rest[0]};
  bp.degree = 4;
  return bp;
}

std::vector<BandPoint> band_points_impl(const SSHLongRangeParams& p, double theta,
                                        const GbtOptions& opts) {
  check_theta(theta);
  std::vector<BandPoint> out;
  const double scale = std::max({1.0, std::abs(p.t0), std::abs(p.t1L), std::abs(p.t1R),
                                 std::abs(p.t2)});

  if (std::abs(p.t2) <= 1e-14 * scale) {
    // Effective degree two: t2 = 0 and constant alpha = log(t1R/t1L)/2.
    if (std::abs(p.t0) <= 1e-14 * scale || std::abs(p.t1L) <= 1e-14 * scale ||
        std::abs(p.t1R) <= 1e-14 * scale)
      return out;
    cplx ratio = p.t1R / p.t1L;
    if (!nearly_real(ratio) || ratio.real() <= 0.0) return out;
    double alpha = 0.5 * std::log(ratio.real());
    double c = std::cos(theta);
    cplx e2 = p.t0 * p.t0 + p.t1L * p.t1R + 2.0 * p.t0 * p.t1L * std::exp(alpha) * c;
    BandPoint bp;
    bp.alpha = alpha;
    bp.sqrt_term = sqrt_main(e2);
    bp.z = {std::polar(std::exp(alpha), theta), std::polar(std::exp(alpha), -theta), 0.0,
            0.0};
    bp.degree = 2;
    out.push_back(bp);
    return out;
  }
  if (std::abs(p.t0 * p.t2) <= 1e-14 * scale * scale) return out;

  Omegas w = ssh_omegas(p);
  if (std::abs(w.w1 - w.w3) <= opts.tol_cond) {
    // Skin-free regime (omega_1 = omega_3): the pair sits on the unit circle.
    if (auto bp = validate_deg4(p, theta, 0.0, sqrt_term_alpha0(p, theta), opts))
      out.push_back(*bp);
    return out;
  }

  // 2 w0 cos(theta) (u^4 - 1) = w1 u^3 - w3 u, u = e^alpha.
  const cplx c = std::cos(theta);
  std::vector<cplx> ucoef = {2.0 * w.w0 * c, -w.w1, 0.0, w.w3, -2.0 * w.w0 * c};
  std::vector<double> alphas;
  for (cplx u : poly_roots(std::move(ucoef))) {
    if (std::abs(u.imag()) > 1e-9 * std::max(1.0, std::abs(u))) continue;
    if (u.real() <= 1e-12) continue;
    double a = std::log(u.real());
    if (std::abs(a) <= opts.tol_zero) continue;
    bool dup = false;
    for (double b : alphas)
      if (std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a))) dup = true;
    if (!dup) alphas.push_back(a);
  }
  std::sort(alphas.begin(), alphas.end());
  for (double a : alphas) {
    cplx s;
    try {
      s = energy_of_alpha(p, a, theta).first - p.onsite;
    } catch (const std::domain_error&) {
      continue;
    }
    if (auto bp = validate_deg4(p, theta, a, s, opts)) out.push_back(*bp);
  }
  return out;
}

struct BoundarySystem {
  Eigen::MatrixXcd M;
  std::array<double, 4> shift{};
  bool im_mode = true;
};

// Open-boundary conditions on the generalized Bloch components: the B
// amplitude continued to cells 0 and -1 and the A amplitude continued to
// cells N+1 and N+2 must vanish (only cells 0 and N+1 when t2 = 0).
// Columns are scaled by |z|^{-(N+1)} for growing roots; the scaling is real
// so the determinant keeps its phase structure.
BoundarySystem build_boundary(const SSHLongRangeParams& p, const BandPoint& bp,
                              int cells) {
  const int k = bp.degree;
  BoundarySystem sys;
  sys.M.resize(k, k);
  auto gamma = [&](cplx z) { return (p.t0 + p.t1L * z + p.t2 * z * z) / bp.sqrt_term; };
  for (int i = 0; i < k; ++i) {
    cplx z = bp.z[static_cast<size_t>(i)];
    double a = std::abs(z) > 1.0 ? static_cast<double>(cells + 1) : 0.0;
    sys.shift[static_cast<size_t>(i)] = a;
    cplx g = gamma(z);
    if (k == 4) {
      sys.M(0, i) = g * pw(z, 0.0, a);
      sys.M(1, i) = g * pw(z, -1.0, a);
      sys.M(2, i) = pw(z, cells + 1.0, a);
      sys.M(3, i) = pw(z, cells + 2.0, a);
    } else {
      sys.M(0, i) = g * pw(z, 0.0, a);
      sys.M(1, i) = pw(z, cells + 1.0, a);
    }
  }
  if (k == 4) {
    cplx z3 = bp.z[2];
    sys.im_mode = std::abs(z3.imag()) <= 1e-9 * (1.0 + std::abs(z3));
  }
  return sys;
}

double boundary_det(const SSHLongRangeParams& p, const BandPoint& bp, int cells) {
  BoundarySystem sys = build_boundary(p, bp, cells);
  cplx d = sys.M.determinant();
  return sys.im_mode ? d.imag() : d.real();
}

struct FEval {
  BandPoint bp;
  double f;
};

std::vector<FEval> evaluate_branches(const SSHLongRangeParams& p, double theta, int cells,
                                     const GbtOptions& opts) {
  std::vector<FEval> out;
  for (const BandPoint& bp : band_points_impl(p, theta, opts))
    out.push_back({bp, boundary_det(p, bp, cells)});
  return out;
}

SynthesizedState synthesize(const SSHLongRangeParams& p, const BandPoint& bp, int branch,
                            int cells) {
  BoundarySystem sys = build_boundary(p, bp, cells);
  const int k = bp.degree;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.M, Eigen::ComputeFullV);
  Eigen::VectorXcd c = svd.matrixV().col(k - 1);

  SynthesizedState st;
  st.null_residual = (sys.M * c).norm();
  st.shift = sys.shift;
  for (int i = 0; i < k; ++i) st.coeff[static_cast<size_t>(i)] = c(i);

  const cplx et = static_cast<double>(branch) * bp.sqrt_term;
  auto gamma = [&](cplx z) { return (p.t0 + p.t1L * z + p.t2 * z * z) / et; };
  st.amplitudes.resize(2 * cells);
  for (int n = 1; n <= cells; ++n) {
    cplx fa = 0.0, fb = 0.0;
    for (int i = 0; i < k; ++i) {
      cplx z = bp.z[static_cast<size_t>(i)];
      cplx t = c(i) * pw(z, static_cast<double>(n), sys.shift[static_cast<size_t>(i)]);
      fa += t;
      fb += t * gamma(z);
    }
    st.amplitudes(2 * (n - 1)) = fa;
    st.amplitudes(2 * (n - 1) + 1) = fb;
  }
  st.amplitudes.normalize();
  int imax = 0;
  st.amplitudes.cwiseAbs().maxCoeff(&imax);
  cplx piv = st.amplitudes(imax);
  if (std::abs(piv) > 0.0) st.amplitudes *= std::conj(piv) / std::abs(piv);
  return st;
}

struct QRoot {
  double theta;
  BandPoint bp;
};

std::pair<ThetaQuantization, std::vector<QRoot>> quantize_impl(
    const SSHLongRangeParams& p, int cells, const GbtOptions& opts) {
  if (cells < 6) throw std::invalid_argument("quantized_thetas: need at least 6 cells");
  if (!real_hoppings(p))
    throw std::invalid_argument(
        "quantized_thetas: real hopping amplitudes required for the theta scan");

  ThetaQuantization q;
  std::vector<QRoot> roots_out;
  const Eigen::MatrixXcd H = build_open_chain(ssh_to_spec(p), cells).matrix;

  const int grid = opts.grid_per_cell * cells;
  auto theta_at = [&](int i) { return kPi * (i + 1) / (grid + 1); };

  auto nearest_branch = [](const std::vector<FEval>& evs, double alpha_ref)
      -> std::optional<FEval> {
    std::optional<FEval> best;
    double dist = 0.2 * (1.0 + std::abs(alpha_ref));
    for (const FEval& e : evs) {
      double d = std::abs(e.bp.alpha - alpha_ref);
      if (d <= dist) {
        dist = d;
        best = e;
      }
    }
    return best;
  };

  std::vector<FEval> prev = evaluate_branches(p, theta_at(0), cells, opts);
  double prev_theta = theta_at(0);
  for (int i = 1; i < grid; ++i) {
    double theta = theta_at(i);
    std::vector<FEval> cur = evaluate_branches(p, theta, cells, opts);
    if (prev.empty() || cur.empty()) {
      ++q.skipped_subintervals;
      prev = std::move(cur);
      prev_theta = theta;
      continue;
    }
    for (const FEval& c0 : cur) {
      auto p0 = nearest_branch(prev, c0.bp.alpha);
      if (!p0) continue;
      if (!(p0->f == 0.0 || c0.f == 0.0 || (p0->f > 0) != (c0.f > 0))) continue;

      double lo = prev_theta, hi = theta, flo = p0->f;
      double alpha_ref = c0.bp.alpha;
      BandPoint found = c0.bp;
      for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        auto evs = evaluate_branches(p, mid, cells, opts);
        auto m0 = nearest_branch(evs, alpha_ref);
        if (!m0) break;
        alpha_ref = m0->bp.alpha;
        found = m0->bp;
        if (flo == 0.0 || (flo > 0) == (m0->f > 0)) {
          lo = mid;
          flo = m0->f;
        } else {
          hi = mid;
        }
      }
      double root = 0.5 * (lo + hi);
      if (auto bps = nearest_branch(evaluate_branches(p, root, cells, opts), alpha_ref))
        found = bps->bp;

      SynthesizedState st = synthesize(p, found, +1, cells);
      cplx energy = p.onsite + found.sqrt_term;
      double res = (H * st.amplitudes - energy * st.amplitudes).norm();
      if (res > opts.state_residual) {
        ++q.rejected_candidates;
        continue;
      }
      bool dup = false;
      for (const QRoot& r : roots_out)
        if (std::abs(r.theta - root) <= 1e-10) dup = true;
      if (!dup) roots_out.push_back({root, found});
    }
    prev = std::move(cur);
    prev_theta = theta;
  }
  std::sort(roots_out.begin(), roots_out.end(),
            [](const QRoot& a, const QRoot& b) { return a.theta < b.theta; });
  for (const QRoot& r : roots_out) q.thetas.push_back(r.theta);
  return {q, roots_out};
}

}  // namespace

std::vector<BandPoint> band_points(const SSHLongRangeParams& p, double theta,
                                   const GbtOptions& opts) {
  return band_points_impl(p, theta, opts);
}

std::vector<double> alpha_of_theta(const SSHLongRangeParams& p, double theta,
                                   const GbtOptions& opts) {
  check_theta(theta);
  const double scale = std::max({1.0, std::abs(p.t0), std::abs(p.t1L), std::abs(p.t1R),
                                 std::abs(p.t2)});
  if (std::abs(p.t0 * p.t2) <= 1e-14 * scale * scale)
    throw std::domain_error("alpha_of_theta: requires t0*t2 != 0");
  Omegas w = ssh_omegas(p);
  if (std::abs(w.w1 - w.w3) <= opts.tol_cond) return {};

  std::vector<double> out;
  for (const BandPoint& bp : band_points_impl(p, theta, opts)) out.push_back(bp.alpha);
  return out;
}

std::pair<cplx, cplx> energy_of_alpha(const SSHLongRangeParams& p, double alpha,
                                      double theta) {
  (void)theta;  // enters only through the consistency of (alpha, theta) pairs
  Omegas w = ssh_omegas(p);
  if (std::abs(w.w0) == 0.0)
    throw std::domain_error("energy_of_alpha: requires t0*t2 != 0");
  const double sh2 = std::sinh(2.0 * alpha);
  if (std::abs(sh2) < 1e-300)
    throw std::domain_error("energy_of_alpha: sinh(2*alpha) vanishes at alpha = 0");
  const double ch2 = std::cosh(2.0 * alpha);
  cplx rad = p.t0 * p.t0 + p.t1L * p.t1R + p.t2 * p.t2 -
             p.t0 * p.t2 *
                 (2.0 * ch2 + (2.0 * w.w1 * w.w3 * ch2 - w.w1 * w.w1 - w.w3 * w.w3) /
                                  (4.0 * w.w0 * w.w0 * sh2 * sh2));
  cplx s = sqrt_main(rad);
  return {p.onsite + s, p.onsite - s};
}

ThetaQuantization quantized_thetas(const SSHLongRangeParams& p, int cells,
                                   const GbtOptions& opts) {
  return quantize_impl(p, cells, opts).first;
}

std::vector<GBSolution> solve_finite_chain(const SSHLongRangeParams& p, int cells,
                                           const GbtOptions& opts) {
  auto [q, roots_out] = quantize_impl(p, cells, opts);
  std::vector<GBSolution> out;
  for (const QRoot& r : roots_out) {
    for (int branch : {+1, -1}) {
      GBSolution sol;
      sol.theta = r.theta;
      sol.alpha = r.bp.alpha;
      sol.energy = p.onsite + static_cast<double>(branch) * r.bp.sqrt_term;
      sol.branch = branch;
      sol.z1 = r.bp.z[0];
      sol.z2 = r.bp.z[1];
      sol.z3 = r.bp.z[2];
      sol.z4 = r.bp.z[3];
      sol.degree = r.bp.degree;
      sol.cells = cells;
      out.push_back(sol);
    }
  }
  return out;
}

SynthesizedState eigenstate_ssh_full(const SSHLongRangeParams& p, const GBSolution& sol,
                                     int cells) {
  BandPoint bp;
  bp.alpha = sol.alpha;
  bp.sqrt_term = static_cast<double>(sol.branch) * (sol.energy - p.onsite);
  bp.z = {sol.z1, sol.z2, sol.z3, sol.z4};
  bp.degree = sol.degree;
  return synthesize(p, bp, sol.branch, cells);
}

Eigen::VectorXcd eigenstate_ssh(const SSHLongRangeParams& p, const GBSolution& sol,
                                int cells) {
  return eigenstate_ssh_full(p, sol, cells).amplitudes;
}

Eigen::VectorXcd eigenstate_ssh_bulk(const SSHLongRangeParams& p, const GBSolution& sol,
                                     int cells) {
  if (std::abs(p.t0) == 0.0)
    throw std::domain_error("eigenstate_ssh_bulk: requires t0 != 0");
  const cplx mu1 = std::exp(-sol.alpha) * p.t1R / p.t0;
  const cplx mu2 = std::exp(-2.0 * sol.alpha) * p.t2 / p.t0;
  const cplx et = sol.energy - p.onsite;

  Eigen::VectorXcd psi(2 * cells);
  for (int n = 1; n <= cells; ++n) {
    double en = std::exp(sol.alpha * n);
    cplx fa = en * (std::sin(n * sol.theta) + mu1 * std::sin((n - 1) * sol.theta) +
                    mu2 * std::sin((n - 2) * sol.theta));
    cplx fb = et * en * std::sin(n * sol.theta);
    psi(2 * (n - 1)) = fa;
    psi(2 * (n - 1) + 1) = fb;
  }
  psi.normalize();
  int imax = 0;
  psi.cwiseAbs().maxCoeff(&imax);
  cplx piv = psi(imax);
  if (std::abs(piv) > 0.0) psi *= std::conj(piv) / std::abs(piv);
  return psi;
}

double boundary_equation(double mu1, double mu2, double theta, int cells) {
  return std::sin((cells + 1) * theta) + mu1 * std::sin(cells * theta) +
         mu2 * std::sin((cells - 1) * theta);
}

double boundary_equation_residual(const SSHLongRangeParams& p, double alpha, double theta,
                                  int cells) {
  if (!real_hoppings(p) || std::abs(p.t0) == 0.0)
    throw std::invalid_argument(
        "boundary_equation_residual: real hoppings with t0 != 0 required");
  double mu1 = std::exp(-alpha) * (p.t1R / p.t0).real();
  double mu2 = std::exp(-2.0 * alpha) * (p.t2 / p.t0).real();
  return boundary_equation(mu1, mu2, theta, cells);
}

std::vector<double> boundary_equation_thetas(double mu1, double mu2, int cells,
                                             int grid_per_cell) {
  std::vector<double> out;
  const int grid = grid_per_cell * cells;
  auto f = [&](double th) { return boundary_equation(mu1, mu2, th, cells); };
  double prev_theta = kPi / (grid + 1);
  double prev_f = f(prev_theta);
  for (int i = 1; i < grid; ++i) {
    double theta = kPi * (i + 1) / (grid + 1);
    double cur = f(theta);
    if (prev_f == 0.0) out.push_back(prev_theta);
    if ((prev_f > 0) != (cur > 0) && prev_f != 0.0) {
      double lo = prev_theta, hi = theta, flo = prev_f;
      while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0 || (fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev_theta = theta;
    prev_f = cur;
  }
  return out;
}

}  // namespace gbloch
