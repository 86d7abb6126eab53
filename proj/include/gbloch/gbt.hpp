#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "gbloch/model.hpp"

namespace gbloch {

struct GbtOptions {
  double tol_root = 1e-9;   // polynomial residual tolerance (relative)
  double tol_sep = 1e-8;    // modulus separation of the outer roots from e^alpha
  double tol_zero = 1e-10;  // |alpha| below this counts as alpha = 0
  double tol_cond = 1e-10;  // absolute tolerance on omega_1 = omega_3
  int grid_per_cell = 40;   // theta-grid density for the quantization scan
  double state_residual = 1e-8;  // acceptance bound for synthesized eigenpairs
};

/// One solved generalized Bloch state of the SSH chain.  The conjugate pair
/// z1 = e^{alpha + i theta}, z2 = e^{alpha - i theta} is the middle-modulus
/// pair of the characteristic polynomial at this energy; z3, z4 are the
/// remaining roots (zero when the effective degree is two).
struct GBSolution {
  double theta = 0.0;
  double alpha = 0.0;
  cplx energy{0.0};
  int branch = +1;  // sign of the square-root branch in the energy formula
  cplx z1{0.0}, z2{0.0}, z3{0.0}, z4{0.0};
  int degree = 4;
  int cells = 0;  // 0 = thermodynamic limit
  bool separated = true;
};

/// Localization parameters alpha solving
///   cos(theta) = (omega_1 e^alpha - omega_3 e^{-alpha})
///                / (2 omega_0 (e^{2 alpha} - e^{-2 alpha}))
/// for the SSH chain, theta in (0, pi).  Each positive real root u = e^alpha
/// of the equivalent quartic is validated: e^{alpha +- i theta} must be
/// roots of the characteristic polynomial at the matching energy and must
/// form its middle-modulus pair, with the other two roots separated from
/// e^alpha by more than tol_sep.  Empty when omega_1 = omega_3 (no skin
/// effect; alpha = 0 is handled by the skin-condition analysis).
std::vector<double> alpha_of_theta(const SSHLongRangeParams& p, double theta,
                                   const GbtOptions& opts = {});

/// Both branches of the closed-form SSH eigenvalue at a given alpha.
/// Throws when sinh(2 alpha) vanishes.
std::pair<cplx, cplx> energy_of_alpha(const SSHLongRangeParams& p, double alpha,
                                      double theta);

/// Finite-chain theta quantization.  Solves the open-boundary determinant
/// built from all roots of the characteristic polynomial (four conditions
/// for the range-2 chain, two when t2 = 0) by sign-change bracketing on a
/// grid of grid_per_cell*N points followed by bisection; every returned
/// theta is validated by synthesizing the eigenpair and checking its dense
/// residual.
struct ThetaQuantization {
  std::vector<double> thetas;
  int skipped_subintervals = 0;   // grid intervals without a usable branch
  int rejected_candidates = 0;    // determinant zeros failing state validation
};

ThetaQuantization quantized_thetas(const SSHLongRangeParams& p, int cells,
                                   const GbtOptions& opts = {});

/// All validated finite-chain solutions (both energy branches per theta),
/// ascending in theta.
std::vector<GBSolution> solve_finite_chain(const SSHLongRangeParams& p, int cells,
                                           const GbtOptions& opts = {});

/// Synthesized eigenstate and its boundary-layer decomposition.  The
/// amplitude at cell n is sum_i coeff[i] * z_i^{n - shift[i]}; shifts keep
/// the growing components representable.
struct SynthesizedState {
  Eigen::VectorXcd amplitudes;     // interleaved (A, B) per cell, unit norm
  std::array<cplx, 4> coeff{};     // per-root A-coefficients (scaled)
  std::array<double, 4> shift{};   // per-root exponent shifts
  double null_residual = 0.0;      // ||M c|| of the boundary system
};

SynthesizedState eigenstate_ssh_full(const SSHLongRangeParams& p,
                                     const GBSolution& sol, int cells);

/// Exact open-chain eigenstate, interleaved site order, unit Euclidean
/// norm, global phase fixed by making the largest-modulus entry real
/// positive.
Eigen::VectorXcd eigenstate_ssh(const SSHLongRangeParams& p, const GBSolution& sol,
                                int cells);

/// Two-component generalized Bloch profile
///   phi_{n,A} = e^{alpha n} (sin n.theta + mu1 sin (n-1).theta + mu2 sin (n-2).theta),
///   phi_{n,B} = (E - eps0) e^{alpha n} sin n.theta,
/// normalized like eigenstate_ssh.  Exact in the chain interior; near the
/// edges it omits the boundary-layer corrections of the full state.
Eigen::VectorXcd eigenstate_ssh_bulk(const SSHLongRangeParams& p,
                                     const GBSolution& sol, int cells);

/// Left-hand side of the two-component boundary equation
///   sin((N+1) theta) + mu1 sin(N theta) + mu2 sin((N-1) theta).
double boundary_equation(double mu1, double mu2, double theta, int cells);

/// Its value with mu1 = e^{-alpha} t1R / t0, mu2 = e^{-2 alpha} t2 / t0
/// (real hopping amplitudes required).
double boundary_equation_residual(const SSHLongRangeParams& p, double alpha,
                                  double theta, int cells);

/// All roots of the two-component boundary equation in (0, pi) at fixed
/// mu1, mu2 (grid scan plus bisection).
std::vector<double> boundary_equation_thetas(double mu1, double mu2, int cells,
                                             int grid_per_cell = 40);

/// Band point of the infinite chain at a given theta: validated alpha, the
/// two energy branches and the characteristic roots ordered as in
/// GBSolution.  Several entries appear only when several alpha branches
/// validate at this theta.
struct BandPoint {
  double alpha = 0.0;
  cplx sqrt_term{0.0};  // E_pm = onsite +- sqrt_term
  std::array<cplx, 4> z{};
  int degree = 4;
};

std::vector<BandPoint> band_points(const SSHLongRangeParams& p, double theta,
                                   const GbtOptions& opts = {});

}  // namespace gbloch
