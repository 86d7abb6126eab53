#pragma once

#include <stdexcept>
#include <vector>

#include "gbloch/model.hpp"

namespace gbloch {

/// Thrown when the leading coefficient of a characteristic polynomial
/// vanishes (typically at a real-space exceptional point).
struct degenerate_polynomial : std::domain_error {
  using std::domain_error::domain_error;
};

/// Characteristic polynomial of the generalized Bloch ansatz at a fixed
/// energy, stored as the coefficients omega_0..omega_deg of the
/// alternating-sign convention
///     P(z) = sum_k (-1)^k omega_k z^{deg-k},  omega_0 != 0.
struct CharPoly {
  std::vector<cplx> omega;
  cplx energy{0.0};

  int degree() const { return static_cast<int>(omega.size()) - 1; }
  /// Monomial coefficient of z^{degree-k}, i.e. (-1)^k omega_k.
  cplx coeff(int k) const;
  cplx eval(cplx z) const;
  /// Largest coefficient magnitude, used to scale residual tolerances.
  double scale() const;
};

/// Builds the characteristic polynomial of a generic two-band chain.  The
/// degree is the structural Laurent span of the symbol (4*range when every
/// extremal hop is present); the overall sign is normalized so that the
/// same-orbital product enters positively at the leading power when it is
/// structurally present, and the inter-orbital product otherwise.
CharPoly charpoly_generic(const HoppingSpec& spec, cplx energy);

/// Closed-form quartic for the long-range SSH chain.
CharPoly charpoly_ssh(const SSHLongRangeParams& p, cplx energy);

/// Closed-form quartic for the ladder model.
CharPoly charpoly_ladder(const LadderParams& p, cplx energy);

/// Roots sorted by ascending modulus; groups of equal modulus (within a
/// relative 1e-10) are ordered by ascending phase in [0, 2*pi).
struct RootSet {
  std::vector<cplx> roots;
};

RootSet roots(const CharPoly& cp, double tol_root = 1e-9);

/// k-th entry (k = 1..degree) is |e_k(roots) - omega_k/omega_0| where e_k is
/// the k-th elementary symmetric polynomial.
std::vector<double> vieta_residuals(const CharPoly& cp, const RootSet& rs);

/// Roots of an arbitrary polynomial given coefficients from the highest
/// power down.  Coefficients below 1e-13 of the largest magnitude are
/// treated as structural zeros (trimmed at the front, converted to zero
/// roots at the back).
std::vector<cplx> poly_roots(std::vector<cplx> coeffs);

}  // namespace gbloch
