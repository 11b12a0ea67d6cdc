#pragma once

// Exact representation of reaction networks (species / complexes / reactions)
// and their stoichiometric geometry.

#include "crn/errors.hpp"
#include "crn/rational.hpp"
#include "crn/ratlin.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crn {

struct Species {
  int id = 0;
  std::string name;
};

// A complex is a formal nonnegative integer combination of species.
struct Complex {
  std::vector<long long> coeffs;

  bool operator==(const Complex& o) const { return coeffs == o.coeffs; }
  bool operator<(const Complex& o) const { return coeffs < o.coeffs; }
  long long total() const
  {
    long long s = 0;
    for (long long c : coeffs) s += c;
    return s;
  }
};

// Reaction endpoints are indices into ReactionNetwork::complexes.
struct Reaction {
  int source = -1;
  int target = -1;
  bool operator==(const Reaction& o) const
  {
    return source == o.source && target == o.target;
  }
};

struct ReactionNetwork {
  std::vector<Species> species;
  std::vector<Complex> complexes;
  std::vector<Reaction> reactions;

  int n() const { return static_cast<int>(species.size()); }

  const Complex& source_of(int j) const { return complexes[reactions[j].source]; }
  const Complex& target_of(int j) const { return complexes[reactions[j].target]; }

  // target - source of reaction j as an exact vector.
  RatVec reaction_vector(int j) const;

  // Distinct source complexes (indices into `complexes`), declaration order.
  std::vector<int> source_complex_ids() const;

  void validate() const;  // throws on self loops, duplicates, unused complexes
};

// Build a network from raw reaction pairs; complexes are deduplicated in
// first-appearance order (source before target).
ReactionNetwork make_network(const std::vector<std::string>& species_names,
                             const std::vector<std::pair<Complex, Complex>>& reactions);

struct StoichSubspace {
  RatMat basis;  // rows = independent spanning vectors
  int dim = 0;
};

// Columns are target - source per reaction, declaration order.
std::vector<std::vector<long long>> stoichiometric_matrix(const ReactionNetwork& net);

StoichSubspace stoichiometric_subspace(const ReactionNetwork& net);

struct LinkageClasses {
  std::vector<std::vector<int>> complex_ids;   // one list per class
  std::vector<std::vector<int>> reaction_ids;  // matching partition of reactions
};

LinkageClasses linkage_classes(const ReactionNetwork& net);

bool is_weakly_reversible(const ReactionNetwork& net);

struct SubnetworkBlock {
  ReactionNetwork net;              // same species list as the parent
  RatVec a;                         // coset representative: C_s ⊂ a + S
  std::vector<int> complex_ids;     // parent complex ids in this block
  std::vector<int> reaction_ids;    // parent reaction ids in this block
};

struct SubnetworkDecomposition {
  std::vector<SubnetworkBlock> blocks;
};

// Partition of complexes by cosets of the stoichiometric subspace.
SubnetworkDecomposition stoichiometric_subnetworks(const ReactionNetwork& net);

int deficiency(const ReactionNetwork& net);  // m - l - s, asserted >= 0

// One vertex F_W of the compatibility-class polyhedron, annotated (when
// dim S = 2) with the structure used by the T+ construction: the zero set W,
// the two adjacent edge directions v1, v2, the index splits W1/W2, and the
// distinguished pair (k, l) with the normalization p_l = q_k = 1.
struct ClassVertex {
  RatVec F;
  std::vector<int> W;
  std::vector<int> W1, W2;
  RatVec v1, v2;   // normalized edge directions (p = v1, q = v2)
  int k = -1, l = -1;
  bool annotated = false;
  Point2 frame;    // vertex position in the class frame coordinates
};

struct CompatibilityClass {
  RatVec c0;
  StoichSubspace S;
  RatMat frame_basis;                 // S.dim rows; x = c0 + sum u_j * basis[j]
  std::vector<ClassVertex> vertices;  // dim 2: ordered along the polygon
  bool bounded = true;
  Rat v_min;                          // min nonzero vertex coordinate

  int dim() const { return S.dim; }
  // Frame coordinates of an exact point of c0 + S.
  Point2 to_frame(const RatVec& x) const;  // requires S.dim == 2
  RatVec from_frame(const Point2& u) const;
};

CompatibilityClass compatibility_class(const ReactionNetwork& net, const RatVec& c0);

double monomial(const std::vector<double>& c, const Complex& P);  // c^P, 0^0 = 1

bool is_complex_balanced_equilibrium(const ReactionNetwork& net,
                                     const std::vector<double>& rates,
                                     const std::vector<double>& c, double tol);

// Unique positive complex-balanced equilibrium in the class of c0, by damped
// Gauss-Newton in log coordinates.
std::vector<double> birch_point(const ReactionNetwork& net,
                                const std::vector<double>& rates,
                                const std::vector<double>& c0, double tol);

}  // namespace crn
