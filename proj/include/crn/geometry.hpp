#pragma once

// Planar computational geometry for reaction networks: essential supports,
// inward cones, the parallel sweep test, endotactic / lower-endotactic
// classification, projections and affine images.  All predicates are exact
// (rational arithmetic, primitive integer directions).

#include "crn/network.hpp"
#include "crn/rational.hpp"

#include <optional>
#include <vector>

namespace crn {

// A 2D cone, either the full plane or the set of rays sweeping
// counterclockwise from gens[0] to gens.back() (angular spread <= pi).
// Empty gens with full == false is the trivial cone {0}.
struct Cone2 {
  bool full = false;
  bool gens_are_line = false;  // two opposite generators spanning a line
  std::vector<Point2> gens;    // 0, 1 or 2 primitive generators

  bool trivial() const { return !full && gens.empty(); }
  bool contains(const Point2& v) const;
};

// Conic hull of a set of directions (exact angular-gap construction).
Cone2 conic_hull(std::vector<Point2> dirs);

// A planar (or generalized planar) network in exact 2D frame coordinates.
struct PlanarNet {
  struct PReaction {
    Point2 src, tgt;
    int parent = -1;  // reaction index in the originating ReactionNetwork
  };
  struct HalfPlane {
    Point2 a;  // constraint a . u >= b
    Rat b;
  };
  std::vector<PReaction> reactions;
  std::vector<HalfPlane> affplus;  // frame description of aff+(N)
  int aff_dim = 2;                 // dimension of aff(N) (1 when embedded)

  // Frame data relative to the source network (when built by planar_frame).
  RatVec origin;
  RatMat basis2;  // two rows

  std::vector<Point2> sources() const;  // distinct source points
  Cone2 inward_cone() const;            // iv(aff+(N)) = conic hull of normals
  bool affplus_bounded() const { return inward_cone().full; }
};

// Build the exact frame for a network with dim(aff(N)) <= 2; 1-dimensional
// hulls are embedded into a containing 2-plane (lowest-index non-parallel
// coordinate direction).  Throws NotPlanar otherwise.
PlanarNet planar_frame(const ReactionNetwork& net);

// Subnetwork of reactions whose vectors are not orthogonal to v (v given in
// the ambient species coordinates).
ReactionNetwork essential_subnetwork(const ReactionNetwork& net, const RatVec& v);

struct SweepVerdict {
  Point2 v;
  Rat essential_support_offset;     // min of v . P over sources of N_v
  bool essential_empty = false;     // R_v empty: vacuous pass
  std::vector<int> violating;       // indices into PlanarNet::reactions
  std::vector<int> violating_parent;  // parent reaction ids (when known)

  bool passed() const { return violating.empty(); }
};

// The parallel sweep test for direction v (frame coordinates).
SweepVerdict sweep_test(const PlanarNet& net, const Point2& v);
SweepVerdict sweep_test(const ReactionNetwork& net, const Point2& v);

// Finite direction set per the hull-side / cone-generator reduction:
// inward normals of sides of conv(SC(N)) lying in iv(aff+(N)), plus the
// generators of iv(aff+(N)) when aff+(N) is unbounded.
std::vector<Point2> candidate_directions(const PlanarNet& net);
std::vector<Point2> candidate_directions(const ReactionNetwork& net);

struct EndoVerdict {
  bool ok = true;
  std::optional<SweepVerdict> witness;  // first failing direction
};

EndoVerdict is_lower_endotactic(const PlanarNet& net);
EndoVerdict is_lower_endotactic(const ReactionNetwork& net);

EndoVerdict is_endotactic(const PlanarNet& net);
EndoVerdict is_endotactic(const ReactionNetwork& net);

// Delete species outside W; reactions whose projections coincide are dropped,
// duplicates are merged (the projected R is a set).
ReactionNetwork project_network(const ReactionNetwork& net, const std::vector<int>& W);

// Image of a planar net under an invertible affine map u -> M u + t of the
// frame plane.  Throws ImageNotNonnegative for a degenerate map.
PlanarNet affine_image(const PlanarNet& net, const RatMat& M, const Point2& t);

}  // namespace crn
