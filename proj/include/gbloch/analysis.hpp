#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbloch/gbt.hpp"
#include "gbloch/model.hpp"
#include "gbloch/polynomial.hpp"

namespace gbloch {

enum class Side { none, left, right };

std::string to_string(Side s);

/// Existence verdict for the non-Hermitian skin effect with the residuals
/// of the defining coefficient conditions.
struct SkinVerdict {
  bool exists = false;
  Side side = Side::none;
  std::map<std::string, double> residuals;
  std::optional<double> alpha_rep;  // representative localization exponent
  std::string alpha_rep_source;
};

/// Skin effect exists iff omega_1 != omega_3.  The side follows the sign of
/// alpha at theta = pi/2.  Requires t0*t2 != 0 (exceptional-point parameter
/// patterns are classified separately).
SkinVerdict skin_condition_ssh(const SSHLongRangeParams& p, double tol_cond = 1e-10);

/// Skin effect vanishes iff the three energy-independent conditions
///   det tL = det tR,   tr tL = tr tR,
///   t0L tL_AB + t0R tL_BA = t0L tR_BA + t0R tR_AB
/// all hold.  The ladder has no closed-form alpha; the side is taken from
/// the median localization fit of a small dense diagonalization.
SkinVerdict skin_condition_ladder(const LadderParams& p, double tol_cond = 1e-10);

/// Real-space exceptional-point classification: one of the eight known
/// parameter patterns (four per model).  Rows 1-4 are the SSH chain, rows
/// 5-8 the ladder.
struct EPReport {
  int table_row = 0;            // 1..8
  std::string condition;        // matched parameter pattern, human readable
  int order_offset = 0;         // EP order = cells + order_offset
  cplx onsite{0.0};
  cplx ep_shift{0.0};           // eigenvalues onsite +- ep_shift
  Side side = Side::none;       // accumulation end of the coalesced states
  // Model parameters the report was built from (exactly one is set).
  std::optional<SSHLongRangeParams> ssh;
  std::optional<LadderParams> ladder;
  // Resolution of the ambiguous S coefficient (rows 7 only): which reading
  // of the inter-cell product passed self-verification, with the template
  // residuals of both readings.
  std::string s_reading;
  double s_residual_chosen = 0.0;
  double s_residual_alternative = 0.0;

  int order(int cells) const { return cells + order_offset; }
  cplx eigenvalue(int branch) const { return onsite + static_cast<double>(branch) * ep_shift; }
  /// Unnormalized coalesced eigenstate template of length 2*cells.
  Eigen::VectorXcd state(int branch, int cells) const;
};

std::optional<EPReport> ep_classify_ssh(const SSHLongRangeParams& p,
                                        double tol_cond = 1e-10);
std::optional<EPReport> ep_classify_ladder(const LadderParams& p,
                                           double tol_cond = 1e-10);

/// Relative residual ||H psi - E psi|| of the normalized template state.
double ep_residual(const EPReport& report, int branch, int cells);

/// Generalized Brillouin zone sampled through the characteristic
/// polynomial: a sample energy is accepted when the two middle-modulus
/// roots agree within tol_gbz, and both then contribute trajectory points.
struct GBZPoint {
  cplx z;
  cplx energy;
  int sample_index;
};

struct GBZRejection {
  int sample_index;
  cplx energy;
  double mid_gap;  // relative modulus mismatch of the middle pair
  std::string reason;
};

struct GBZTrajectory {
  std::vector<GBZPoint> points;
  std::vector<GBZRejection> rejected;
};

GBZTrajectory gbz_trajectory(const HoppingSpec& spec, const std::vector<cplx>& energies,
                             double tol_gbz = 1e-6);

/// Cross-check of the closed-form localization parameter against the GBZ:
/// max over a theta grid of | log|C_z| - alpha(theta) | with the trajectory
/// seeded by the closed-form energies.  Skin-free parameter sets use the
/// alpha = 0 branch, so both sides vanish where defined.
double gbz_vs_alpha(const SSHLongRangeParams& p, int n_theta,
                    const GbtOptions& opts = {});

/// Pseudo-Hermiticity check of the Bloch Hamiltonian for the t0 = t2 SSH
/// chain with real hoppings, following the similarity
/// H^dagger(k) = rho H(k) rho^{-1} with rho built from h_a, h_b.
struct PseudoHermSample {
  double k = 0.0;
  bool singular = false;         // h_a or h_b vanishes; rho undefined
  double product = 0.0;          // h_a(k) h_b(k), real for real parameters
  double sim_residual = 0.0;     // ||H^dagger - rho H rho^{-1}||
  bool spectrum_real = false;
};

struct PseudoHermReport {
  std::vector<PseudoHermSample> samples;
  double max_residual_unbroken = 0.0;  // over samples with product >= 0
  bool real_iff_nonnegative = true;    // spectrum real exactly when product >= 0
  int singular_count = 0;
};

PseudoHermReport pseudo_hermiticity_check(const SSHLongRangeParams& p,
                                          const std::vector<double>& k_samples,
                                          double tol_cond = 1e-10);

}  // namespace gbloch
