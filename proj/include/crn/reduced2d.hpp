#pragma once

// 2D-reduced mass-action systems: the Lambda comparison curves, their Puiseux
// exponents tau and leading coefficients, the rate-domination constant mu, the
// invariant region L / L+ / Lbar+ near the origin vertex, and the inward
// (Nagumo) boundary check.

#include "crn/errors.hpp"
#include "crn/network.hpp"
#include "crn/rational.hpp"
#include "crn/schedule.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace crn {

// The n x 2 matrix with columns p, q mapping the reduced plane back into
// species space: (Psi u)_i = p_i x + q_i y.  Indices l < k are the two
// distinguished rows with p_l = q_k = 1 and p_k = q_l = 0; D is the least
// common denominator of the remaining nonzero entries.
struct PsiMatrix {
  RatVec p, q;
  int l = 0, k = 1;
  long long D = 1;

  int n() const { return static_cast<int>(p.size()); }
  void validate() const;  // throws DomainError on a malformed matrix
};

// Build a PsiMatrix from its columns; computes D and validates invariants.
PsiMatrix make_psi(RatVec p, RatVec q, int l, int k);

// One stoichiometric block of a reduced system: a two-species network over
// the plane coordinates (x, y), one rate schedule per reaction, and the
// translation a_s entering the rate exponents.
struct ReducedBlock {
  ReactionNetwork net;  // two species (the plane coordinates)
  std::vector<KappaSchedule> kappa;
  RatVec a;  // length n of the ambient system (exponent shift)
};

struct Reduced2DSystem {
  std::vector<ReducedBlock> blocks;
  PsiMatrix psi;
  double eta = 0.5;  // schedules certified to stay within (eta, 1/eta)
};

// Rate K_{P->P'}(t, u) = kappa(t) * prod_i (p_i x + q_i y)^{(Psi P + a)_i}
// and the planar right-hand side f(t, u) summed over all blocks.
double reduced_rate(const Reduced2DSystem& sys, int block, int reaction,
                    double t, std::array<double, 2> u);
std::array<double, 2> reduced2d_rhs(const Reduced2DSystem& sys, double t,
                                    std::array<double, 2> u);

// Parameters of one comparison curve Lambda^A_{alpha,beta}(x, y) =
// x^alpha y^{-beta} prod_{i != l,k} (p_i x + q_i y)^{p_i alpha - q_i beta}
// - A^D, with (alpha, -beta) = D (P - P') for a source pair, so that all
// exponents are integers.
struct LambdaParams {
  long long alpha = 0, beta = 0;
  double A = 1.0;
  PsiMatrix psi;
};

// Evaluate Lambda at (x, y); throws DomainError unless x > 0 and y > 0.
double lambda_eval(const LambdaParams& params, double x, double y);

// Homogeneity bookkeeping: dbar = (1 + sum p_i) alpha, dbbar = (1 + sum q_i)
// beta (sums over i != l,k), delta = dbar - dbbar.  Exact rationals; the
// D-scaled alpha, beta make them integers for genuine source pairs.
struct DeltaTriple {
  Rat dbar, dbbar, delta;
};
DeltaTriple deltas(const LambdaParams& params);

// The unique positive y with Lambda(x, y) = 0.  For alpha*beta < 0 the root
// exists for every x > 0 (strict monotonicity in y).  For alpha*beta > 0 it
// exists for small x; uniqueness is asserted through the sign pattern of the
// polynomial F_x(y) (one sign change); NoRoot / MultipleRoots otherwise.
double lambda_root(const LambdaParams& params, double x);

// The Puiseux exponent tau(sigma) of the root curve for the ratio
// sigma = alpha/beta > 0.  Exact, piecewise in sigma vs (sum q)/(sum p).
Rat tau(const Rat& sigma, const PsiMatrix& psi);

// Leading behaviour of the root curve as x -> 0+ (requires alpha*beta > 0).
// delta != 0: y ~ C x^tau; delta == 0: y ~ gamma x for each positive root
// gamma of the balance polynomial.
struct LeadingCoefficient {
  bool delta_zero = false;
  double tau_value = 1.0;
  double C = 0.0;               // delta != 0 branch
  std::vector<double> gammas;   // delta == 0 branch, sorted increasing
  double min_coeff() const { return delta_zero ? gammas.front() : C; }
  double max_coeff() const { return delta_zero ? gammas.back() : C; }
};
LeadingCoefficient leading_coefficient(const LambdaParams& params);

// Domination constant: max over blocks and sweep directions n in V u {i, j}
// of ||n|| * sum_{R_s} ||P - P'|| / ((P'_0 - P_0) . n), where P_0 -> P'_0 is
// the chosen reaction with source on the essential support line and positive
// projection.  Throws NotLowerEndotactic when no reaction qualifies.
struct ChosenReaction {
  Point2 n;          // sweep direction (primitive)
  int block = -1;
  int reaction = -1; // reaction index within the block's network
};
struct MuResult {
  double mu = 1.0;
  std::vector<ChosenReaction> chosen;
};
MuResult mu_constant(const std::vector<ReducedBlock>& blocks, const PsiMatrix& psi);
inline MuResult mu_constant(const Reduced2DSystem& sys)
{
  return mu_constant(sys.blocks, sys.psi);
}

// The invariant region near the origin vertex.  Lbar+ is bounded by the
// vertex chain A0 ... A_{e+2} (segment i has slope -1/r_i); L+ additionally
// keeps distance d from the axes (vertices A1, A_{e+1} on x = d, y = d).
struct RegionL {
  struct Half {
    double ax = 0, ay = 0, b = 0;  // constraint ax*x + ay*y >= b
  };

  std::vector<Rat> ratios;                      // r_1 < ... < r_e
  std::vector<Rat> taus;                        // tau(r_i), exact
  std::vector<std::array<double, 2>> chain;     // A0, A2..Ae, A_{e+2}
  std::vector<std::array<double, 2>> vertices;  // A0, A1, A2..Ae, A_{e+1}, A_{e+2}
  std::vector<Half> chain_halves;               // Lbar+ = these cap R^2_{>=0}
  std::vector<Half> halves;                     // L+ = chain_halves + x,y >= d
  double delta = 0, xi = 0, d = 0, M = 0, eta = 0, mu = 1, A = 1;
  std::vector<ChosenReaction> chosen;
};

// xi_start / d_start cap the halving searches for xi and d from above (the
// searches only ever shrink, so a cap shared across several constructions
// lets all of them settle on common values); d_start == 0 keeps the default
// geometric start.
RegionL construct_region(const std::vector<ReducedBlock>& blocks,
                         const PsiMatrix& psi, double eta, double M,
                         std::optional<std::array<double, 2>> anchor = {},
                         double xi_start = 0.5, double d_start = 0.0);
inline RegionL construct_region(const Reduced2DSystem& sys, double M,
                                std::optional<std::array<double, 2>> anchor = {})
{
  return construct_region(sys.blocks, sys.psi, sys.eta, M, anchor);
}

// Convex membership in L+ (or Lbar+ when lbar is set); boundary included.
bool region_contains(const RegionL& region, double x, double y, bool lbar = false);

// Sub-tangentiality at a boundary point: n . f(t, x) >= 0 (within a relative
// 1e-9 tolerance) for every inward normal generator of the active constraints.
// Throws DomainError when x is not on the boundary chain of L+ within [0,M]^2
// and RateOutOfBand when a schedule leaves the declared band.
bool nagumo_check(const Reduced2DSystem& sys, const RegionL& region, double t,
                  std::array<double, 2> x);

// JSON serialization (vertices, parameters, direction set, chosen reactions).
std::string region_to_json(const RegionL& region);

}  // namespace crn
