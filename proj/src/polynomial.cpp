#include "gbloch/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gbloch/numerics.hpp"

namespace gbloch {

namespace {

constexpr double kTrimRel = 1e-13;

double phase_in_2pi(cplx z) {
  double ph = std::arg(z);
  if (ph < 0.0) ph += 2.0 * std::numbers::pi;
  return ph;
}

// Laurent polynomial with powers -span..span stored at index p + span.
struct Laurent {
  int span;
  std::vector<cplx> c;
  explicit Laurent(int s) : span(s), c(2 * s + 1, cplx(0.0)) {}
  cplx& at(int p) { return c[p + span]; }
  cplx at(int p) const { return c[p + span]; }
};

Laurent lmul(const Laurent& a, const Laurent& b) {
  Laurent out(a.span + b.span);
  for (int p = -a.span; p <= a.span; ++p) {
    if (a.at(p) == 0.0) continue;
    for (int q = -b.span; q <= b.span; ++q)
      if (b.at(q) != 0.0) out.at(p + q) += a.at(p) * b.at(q);
  }
  return out;
}

struct PowerRange {
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  bool any() const { return lo <= hi; }
  void include(int p) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
};

}  // namespace

cplx CharPoly::coeff(int k) const {
  cplx w = omega[static_cast<size_t>(k)];
  return (k % 2 == 0) ? w : -w;
}

cplx CharPoly::eval(cplx z) const {
  cplx acc = 0.0;
  for (int k = 0; k <= degree(); ++k) acc = acc * z + coeff(k);
  return acc;
}

double CharPoly::scale() const {
  double s = 0.0;
  for (const cplx& w : omega) s = std::max(s, std::abs(w));
  return s;
}

CharPoly charpoly_generic(const HoppingSpec& spec, cplx energy) {
  const int M = spec.range();
  const cplx et = energy - spec.onsite();

  // Symbol g_ij(z) = sum_m hop(m,i,j) z^{-m}.
  auto symbol = [&](Orbital i, Orbital j) {
    Laurent g(M);
    for (int m = -M; m <= M; ++m) g.at(-m) = spec.hop(m, i, j);
    return g;
  };
  Laurent gab = symbol(Orbital::A, Orbital::B);
  Laurent gba = symbol(Orbital::B, Orbital::A);
  Laurent da(M), db(M);
  for (int p = -M; p <= M; ++p) {
    da.at(p) = (p == 0 ? et : cplx(0.0)) - spec.hop(-p, Orbital::A, Orbital::A);
    db.at(p) = (p == 0 ? et : cplx(0.0)) - spec.hop(-p, Orbital::B, Orbital::B);
  }

  Laurent off = lmul(gab, gba);
  Laurent diag = lmul(da, db);
  Laurent L(2 * M);
  for (int p = -2 * M; p <= 2 * M; ++p) L.at(p) = off.at(p) - diag.at(p);

  // Structural power ranges, taken from which hops are stored (nonzero),
  // with the energy always contributing power zero to the diagonal factors.
  auto stored_range = [&](Orbital i, Orbital j) {
    PowerRange r;
    for (int m = -M; m <= M; ++m)
      if (spec.hop(m, i, j) != 0.0) r.include(-m);
    return r;
  };
  PowerRange rab = stored_range(Orbital::A, Orbital::B);
  PowerRange rba = stored_range(Orbital::B, Orbital::A);
  PowerRange raa = stored_range(Orbital::A, Orbital::A);
  PowerRange rbb = stored_range(Orbital::B, Orbital::B);
  raa.include(0);
  rbb.include(0);

  PowerRange total;
  const int diag_hi = raa.hi + rbb.hi;
  total.include(diag_hi);
  total.include(raa.lo + rbb.lo);
  if (rab.any() && rba.any()) {
    total.include(rab.hi + rba.hi);
    total.include(rab.lo + rba.lo);
  }

  const int deg = total.hi - total.lo;
  if (deg < 1)
    throw degenerate_polynomial("charpoly_generic: model has no z-dependence");

  const double sign = (diag_hi == total.hi) ? -1.0 : 1.0;
  CharPoly cp;
  cp.energy = energy;
  cp.omega.resize(static_cast<size_t>(deg) + 1);
  for (int k = 0; k <= deg; ++k) {
    double s = (k % 2 == 0) ? sign : -sign;
    cp.omega[static_cast<size_t>(k)] = s * L.at(total.hi - k);
  }
  if (std::abs(cp.omega[0]) <= kTrimRel * std::max(1.0, cp.scale()))
    throw degenerate_polynomial(
        "charpoly_generic: leading coefficient omega_0 vanishes");
  return cp;
}

CharPoly charpoly_ssh(const SSHLongRangeParams& p, cplx energy) {
  const cplx et = energy - p.onsite;
  CharPoly cp;
  cp.energy = energy;
  cp.omega = {p.t0 * p.t2,
              -(p.t0 * p.t1L + p.t1R * p.t2),
              p.t0 * p.t0 + p.t1L * p.t1R + p.t2 * p.t2 - et * et,
              -(p.t0 * p.t1R + p.t1L * p.t2),
              p.t0 * p.t2};
  if (std::abs(cp.omega[0]) <= kTrimRel * std::max(1.0, cp.scale()))
    throw degenerate_polynomial("charpoly_ssh: t0*t2 vanishes");
  return cp;
}

CharPoly charpoly_ladder(const LadderParams& p, cplx energy) {
  const cplx et = energy - p.onsite;
  CharPoly cp;
  cp.energy = energy;
  cp.omega = {p.tL_AA * p.tL_BB - p.tL_AB * p.tL_BA,
              et * (p.tL_AA + p.tL_BB) + p.t0L * p.tL_AB + p.t0R * p.tL_BA,
              et * et + p.tL_AA * p.tR_BB + p.tL_BB * p.tR_AA - p.t0L * p.t0R -
                  p.tL_AB * p.tR_AB - p.tL_BA * p.tR_BA,
              et * (p.tR_AA + p.tR_BB) + p.t0L * p.tR_BA + p.t0R * p.tR_AB,
              p.tR_AA * p.tR_BB - p.tR_AB * p.tR_BA};
  if (std::abs(cp.omega[0]) <= kTrimRel * std::max(1.0, cp.scale()))
    throw degenerate_polynomial(
        "charpoly_ladder: tL_AA*tL_BB - tL_AB*tL_BA vanishes");
  return cp;
}

std::vector<cplx> poly_roots(std::vector<cplx> coeffs) {
  double scale = 0.0;
  for (const cplx& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};

  size_t lead = 0;
  while (lead < coeffs.size() && std::abs(coeffs[lead]) <= kTrimRel * scale) ++lead;
  coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(lead));

  std::vector<cplx> out;
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= kTrimRel * scale) {
    coeffs.pop_back();
    out.push_back(0.0);
  }
  const int d = static_cast<int>(coeffs.size()) - 1;
  if (d < 1) return out;

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) comp(i + 1, i) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -coeffs[static_cast<size_t>(d - i)] / coeffs[0];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("poly_roots: companion eigensolver failed");
  for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

RootSet roots(const CharPoly& cp, double tol_root) {
  std::vector<cplx> coeffs;
  for (int k = 0; k <= cp.degree(); ++k) coeffs.push_back(cp.coeff(k));
  std::vector<cplx> rts = poly_roots(std::move(coeffs));
  if (static_cast<int>(rts.size()) != cp.degree())
    throw std::runtime_error("roots: degree mismatch after root finding");

  const double scale = cp.scale();
  for (const cplx& r : rts) {
    double bound = tol_root * scale * std::pow(std::max(1.0, std::abs(r)), cp.degree());
    if (std::abs(cp.eval(r)) > bound)
      throw std::runtime_error("roots: residual exceeds tolerance at a root");
  }

  std::sort(rts.begin(), rts.end(),
            [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });
  // Phase-order runs of (numerically) equal modulus.
  size_t start = 0;
  for (size_t i = 1; i <= rts.size(); ++i) {
    bool close = i < rts.size() &&
                 std::abs(rts[i]) - std::abs(rts[start]) <=
                     1e-10 * std::max(1.0, std::abs(rts[start]));
    if (!close) {
      std::sort(rts.begin() + static_cast<long>(start), rts.begin() + static_cast<long>(i),
                [](const cplx& a, const cplx& b) {
                  return phase_in_2pi(a) < phase_in_2pi(b);
                });
      start = i;
    }
  }
  return RootSet{std::move(rts)};
}

std::vector<double> vieta_residuals(const CharPoly& cp, const RootSet& rs) {
  const int d = cp.degree();
  if (static_cast<int>(rs.roots.size()) != d)
    throw std::invalid_argument("vieta_residuals: root count does not match degree");

  // Expand prod (z - r_i) = sum_k a_k z^{d-k}; then e_k = (-1)^k a_k.
  std::vector<cplx> a(static_cast<size_t>(d) + 1, cplx(0.0));
  a[0] = 1.0;
  for (int i = 0; i < d; ++i)
    for (int k = i + 1; k >= 1; --k) a[static_cast<size_t>(k)] -= rs.roots[static_cast<size_t>(i)] * a[static_cast<size_t>(k - 1)];

  std::vector<double> res(static_cast<size_t>(d));
  for (int k = 1; k <= d; ++k) {
    cplx ek = ((k % 2 == 0) ? 1.0 : -1.0) * a[static_cast<size_t>(k)];
    res[static_cast<size_t>(k - 1)] = std::abs(ek - cp.omega[static_cast<size_t>(k)] / cp.omega[0]);
  }
  return res;
}

}  // namespace gbloch
