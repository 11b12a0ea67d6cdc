#pragma once

// Persistence certification for systems with a two-dimensional stoichiometric
// subspace: the geometric constants (delta, lambda), the global parameter
// selection (zeta, eta', xi, epsilon, d), the T+ polyhedron assembled from
// per-vertex cylinders, the full certification pipeline, codimension-2
// repulsion reports, and global-attractor convergence checks for dim S <= 3.

#include "crn/dynamics.hpp"
#include "crn/errors.hpp"
#include "crn/network.hpp"
#include "crn/rational.hpp"
#include "crn/reduced2d.hpp"
#include "crn/schedule.hpp"

#include <string>
#include <vector>

namespace crn {

// Smallest delta with dist(x, F_W) <= delta * dist(x, Z_W) on the whole
// class, where F_W = {x in the class : x_i = 0 for i in W} and Z_W is the
// coordinate subspace {x_i = 0 for i in W}.  Computed from the exact face
// geometry (cone minimization of the W-projection quadratic form); supports
// classes of dimension 1 (segments and rays) and bounded classes of
// dimension 2.  Throws DegenerateFace when the class lies inside Z_W and
// DomainError when F_W is not a face.
double face_distance_delta(const CompatibilityClass& cls,
                           const std::vector<int>& W);

// lambda = min{ m(J) : J subset of species, m(J) > 0 } / sqrt(n) with
// m(J) = dist(class, Z_J) by convex projection; any point of the class with
// coordinates below lambda on an index set I then lies near a face F_W with
// I contained in W.  Returns 1 when the origin belongs to the class (any
// positive value is valid in that case).
double smallness_lambda(const CompatibilityClass& cls);

struct GlobalParams {
  double lambda = 0;     // smallness constant of the class
  double zeta = 0;       // min{lambda, v_min/2, 1}
  double eta_prime = 0;  // min{eta*zeta^E, eta/M^E}
  double xi = 0;         // shared square size of all cylinder regions
  double epsilon = 0;    // [0,epsilon]^2 misses every region
  double d = 0;          // shared axis offset of all cylinder regions
  double M = 0;          // trajectory bound used in the construction
  long long E = 0;       // max total molecularity over source complexes
};

// One cylinder H+_{k,l}: the vertex data, the psi matrix pi_W Theta, the
// projected subnetwork blocks and the planar region over (x_l, x_k).
struct Cylinder {
  RatVec F;                    // the vertex of the class
  std::vector<int> W;          // zero coordinates of the vertex (sorted)
  std::vector<int> W1, W2;     // split of W by the vanishing edge column
  int k = -1, l = -1;          // distinguished species indices, l < k
  RatVec theta_p, theta_q;     // full edge columns with p_l = q_k = 1
  PsiMatrix psi;               // pi_W Theta over the W coordinates
  std::vector<ReducedBlock> blocks;             // projected subnetworks
  std::vector<std::vector<int>> parent_reaction;  // [block][r] -> reaction id
  RegionL region;              // L+_{k,l} in the (x_l, x_k) plane
};

// T+ = (d*1 + nonnegative orthant) intersected with all cylinders; every
// cylinder region shares the common xi and d.
struct TPlusRegion {
  GlobalParams params;
  std::vector<Cylinder> cylinders;
};

// Parameter selection alone (regions are built internally, anchored at the
// class base point, and discarded).  Throws OriginVertex when the origin is
// a vertex of the class and SearchExhausted when a halving search fails.
GlobalParams choose_global_parameters(const CompatibilityClass& cls,
                                      const ReactionNetwork& net, double eta,
                                      double M);

// Full construction: one region per (vertex, (k,l) in W1 x W2) pair, all
// anchored so that (c0_l, c0_k) lies in L+_{k,l}.
TPlusRegion build_t_plus(const CompatibilityClass& cls,
                         const ReactionNetwork& net, double eta, double M,
                         const std::vector<double>& c0);

// Membership in T+ (boundary included, relative tolerance).
bool t_plus_contains(const TPlusRegion& tp, const std::vector<double>& x,
                     double rel_tol = 1e-9);

struct CheckResult {
  std::string name;
  bool passed = false;
  double margin = 0;  // signed; nonnegative when passed
  std::string detail;
};

struct PersistenceCertificate {
  enum class Verdict { Certified, Refuted, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  bool origin_vertex_path = false;  // reduced-route certificate
  double M = 0;                     // empirical trajectory bound (x2 safety)
  GlobalParams params;
  std::vector<Cylinder> cylinders;  // T+ cylinders, or the single reduced region
  std::vector<CheckResult> checks;
  Trajectory trajectory;
  std::vector<double> tail_min, liminf_estimate;
  std::string diagnostics;
};

struct CertifyConfig {
  SimConfig sim;                 // horizon, tolerances, blowup bound
  int boundary_samples = 200;    // boundary points (rays / edge samples)
  int time_samples = 20;         // schedule samples per boundary point
  int containment_samples = 2000;  // dense trajectory samples
  double tol = 1e-9;             // relative acceptance tolerance
  double tail_fraction = 0.5;
  unsigned seed = 12345;         // random sampling (codim-2 windows)
};

// The certification pipeline: structural checks, empirical bound, T+ (or the
// reduced route when the origin is a vertex), trajectory containment,
// sampled inward boundary checks with rate-band assertions, tail metrics.
// Numerical construction failures yield Inconclusive; Refuted is reserved
// for a provable structural failure (a subnetwork that is not
// lower-endotactic, reported with its witness).
PersistenceCertificate certify_persistence_2d(
    const ReactionNetwork& net, const std::vector<KappaSchedule>& schedules,
    const RatVec& c0, double eta, const CertifyConfig& config = {});

struct Codim2Report {
  std::vector<int> W;            // zero coordinates of the face (sorted)
  int k = -1, l = -1;            // distinguished pair inside W
  RatVec vhat1, vhat2;           // normalized transverse edge directions (R^W)
  double epsilon = 0;            // neighborhood size validated for the face
  double tau_prime = 0;          // planar factor min{1, r_1, 1/r_e}
  double tau_factor = 0;         // tau' * min{A,B} / max{A,B}
  double A = 0, B = 0;           // sum of q (resp. p) entries over W
  double eta_reduced = 0;        // rate band of the reduced system
  int windows_checked = 0;       // starts with a nonempty applicable window
  double worst_ratio = 0;        // min over windows of sum(t'') / sum(t')
  std::vector<CheckResult> checks;
};

// Lemma-style repulsion certificate for a codimension-2 face F_W: builds the
// projected reduced system from the face's transverse edge directions,
// derives the rate band from the compact box K (given as bounds over the
// complement coordinates), extracts (epsilon, tau) and verifies the
// sum-growth inequality over simulated windows started inside
// K x [0, epsilon]^W.
Codim2Report codim2_repulsion(const ReactionNetwork& net,
                              const std::vector<KappaSchedule>& schedules,
                              const RatVec& c0, const std::vector<int>& W,
                              const std::vector<double>& K_lo,
                              const std::vector<double>& K_hi, double eta,
                              const CertifyConfig& config = {});

// tau = tau' * min{A,B} / max{A,B} where A (resp. B) sums the entries of the
// second (resp. first) edge column after the p_l = q_k = 1 normalization;
// invariant under rescaling of either column.
double codim2_tau_factor(const RatVec& vhat1, const RatVec& vhat2, int l,
                         int k, double tau_prime);

struct GacStart {
  std::vector<double> c0, birch, terminal;
  double distance = 0;  // sup-norm distance at the horizon
  bool converged = false;
};

struct GacReport {
  double tol = 0;
  bool all_converged = false;
  std::vector<GacStart> starts;
};

// Global-attractor convergence check for weakly reversible complex-balanced
// systems with dim S <= 3: Birch point per class, integration from each
// start, terminal sup-norm distances against tol.
GacReport check_gac(const ReactionNetwork& net,
                    const std::vector<double>& rates,
                    const std::vector<std::vector<double>>& c0_list,
                    double horizon, double tol = 1e-6);

// JSON document: schema version, verdict, parameters, per-cylinder data and
// the check ledger with margins.
std::string certificate_to_json(const PersistenceCertificate& cert);

}  // namespace crn
