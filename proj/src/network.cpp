#include "crn/network.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace crn {

RatVec ReactionNetwork::reaction_vector(int j) const
{
  const Complex& s = source_of(j);
  const Complex& t = target_of(j);
  RatVec v(n());
  for (int i = 0; i < n(); ++i) v[i] = Rat(t.coeffs[i] - s.coeffs[i]);
  return v;
}

std::vector<int> ReactionNetwork::source_complex_ids() const
{
  std::vector<int> ids;
  std::set<int> seen;
  for (const Reaction& r : reactions)
    if (seen.insert(r.source).second) ids.push_back(r.source);
  return ids;
}

void ReactionNetwork::validate() const
{
  std::set<std::string> names;
  for (const Species& s : species) {
    if (s.name.empty()) throw CrnError("InvalidNetwork", "empty species name");
    if (!names.insert(s.name).second)
      throw CrnError("InvalidNetwork", "duplicate species name " + s.name);
  }
  for (const Complex& c : complexes) {
    if (c.coeffs.size() != species.size())
      throw CrnError("InvalidNetwork", "complex arity mismatch");
    for (long long x : c.coeffs)
      if (x < 0) throw CrnError("InvalidNetwork", "negative stoichiometry");
  }
  std::set<std::pair<int, int>> seen;
  std::vector<bool> used(complexes.size(), false);
  for (const Reaction& r : reactions) {
    if (r.source == r.target) throw SelfLoop("reaction P -> P is not allowed");
    if (!seen.insert({r.source, r.target}).second)
      throw DuplicateReaction("repeated reaction");
    used[r.source] = used[r.target] = true;
  }
  for (size_t i = 0; i < complexes.size(); ++i)
    if (!used[i])
      throw CrnError("InvalidNetwork", "complex not used by any reaction");
}

ReactionNetwork make_network(const std::vector<std::string>& species_names,
                             const std::vector<std::pair<Complex, Complex>>& reactions)
{
  ReactionNetwork net;
  for (size_t i = 0; i < species_names.size(); ++i)
    net.species.push_back({static_cast<int>(i), species_names[i]});
  auto intern = [&net](const Complex& c) -> int {
    for (size_t i = 0; i < net.complexes.size(); ++i)
      if (net.complexes[i] == c) return static_cast<int>(i);
    net.complexes.push_back(c);
    return static_cast<int>(net.complexes.size() - 1);
  };
  for (const auto& [src, tgt] : reactions) {
    int a = intern(src);
    int b = intern(tgt);
    net.reactions.push_back({a, b});
  }
  net.validate();
  return net;
}

std::vector<std::vector<long long>> stoichiometric_matrix(const ReactionNetwork& net)
{
  std::vector<std::vector<long long>> cols;
  for (size_t j = 0; j < net.reactions.size(); ++j) {
    const Complex& s = net.source_of(static_cast<int>(j));
    const Complex& t = net.target_of(static_cast<int>(j));
    std::vector<long long> col(net.n());
    for (int i = 0; i < net.n(); ++i) col[i] = t.coeffs[i] - s.coeffs[i];
    cols.push_back(std::move(col));
  }
  return cols;
}

StoichSubspace stoichiometric_subspace(const ReactionNetwork& net)
{
  RatMat rows;
  for (size_t j = 0; j < net.reactions.size(); ++j)
    rows.push_back(net.reaction_vector(static_cast<int>(j)));
  StoichSubspace s;
  s.basis = row_basis(std::move(rows));
  s.dim = static_cast<int>(s.basis.size());
  return s;
}

LinkageClasses linkage_classes(const ReactionNetwork& net)
{
  int m = static_cast<int>(net.complexes.size());
  std::vector<int> comp(m, -1);
  std::vector<std::vector<int>> adj(m);
  for (const Reaction& r : net.reactions) {
    adj[r.source].push_back(r.target);
    adj[r.target].push_back(r.source);
  }
  LinkageClasses lc;
  for (int start = 0; start < m; ++start) {
    if (comp[start] >= 0) continue;
    int id = static_cast<int>(lc.complex_ids.size());
    lc.complex_ids.emplace_back();
    std::vector<int> stack{start};
    comp[start] = id;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      lc.complex_ids[id].push_back(v);
      for (int w : adj[v])
        if (comp[w] < 0) {
          comp[w] = id;
          stack.push_back(w);
        }
    }
    std::sort(lc.complex_ids[id].begin(), lc.complex_ids[id].end());
  }
  lc.reaction_ids.resize(lc.complex_ids.size());
  for (size_t j = 0; j < net.reactions.size(); ++j)
    lc.reaction_ids[comp[net.reactions[j].source]].push_back(static_cast<int>(j));
  return lc;
}

bool is_weakly_reversible(const ReactionNetwork& net)
{
  // Every linkage class must be strongly connected as a digraph.
  int m = static_cast<int>(net.complexes.size());
  std::vector<std::vector<int>> out(m);
  for (const Reaction& r : net.reactions) out[r.source].push_back(r.target);
  auto reachable = [&](int from) {
    std::vector<bool> seen(m, false);
    std::vector<int> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : out[v])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    return seen;
  };
  LinkageClasses lc = linkage_classes(net);
  for (const auto& cls : lc.complex_ids) {
    std::vector<bool> r0 = reachable(cls[0]);
    for (int c : cls)
      if (!r0[c]) return false;
    // Each member must reach back to the class representative.
    for (int c : cls)
      if (!reachable(c)[cls[0]]) return false;
  }
  return true;
}

SubnetworkDecomposition stoichiometric_subnetworks(const ReactionNetwork& net)
{
  StoichSubspace S = stoichiometric_subspace(net);
  int m = static_cast<int>(net.complexes.size());
  std::vector<int> block_of(m, -1);
  SubnetworkDecomposition dec;
  for (int c = 0; c < m; ++c) {
    if (block_of[c] >= 0) continue;
    int id = static_cast<int>(dec.blocks.size());
    dec.blocks.emplace_back();
    block_of[c] = id;
    RatVec rep(net.n());
    for (int i = 0; i < net.n(); ++i) rep[i] = Rat(net.complexes[c].coeffs[i]);
    // Two complexes share a block iff their difference lies in S.
    for (int d = c + 1; d < m; ++d) {
      if (block_of[d] >= 0) continue;
      RatVec diff(net.n());
      for (int i = 0; i < net.n(); ++i)
        diff[i] = Rat(net.complexes[d].coeffs[i]) - rep[i];
      if (in_row_space(S.basis, diff)) block_of[d] = id;
    }
    dec.blocks[id].a = rep;
  }
  for (int c = 0; c < m; ++c) dec.blocks[block_of[c]].complex_ids.push_back(c);
  for (size_t j = 0; j < net.reactions.size(); ++j)
    dec.blocks[block_of[net.reactions[j].source]].reaction_ids.push_back(
        static_cast<int>(j));
  for (SubnetworkBlock& b : dec.blocks) {
    std::vector<std::pair<Complex, Complex>> rs;
    for (int j : b.reaction_ids)
      rs.push_back({net.source_of(j), net.target_of(j)});
    std::vector<std::string> names;
    for (const Species& s : net.species) names.push_back(s.name);
    b.net = make_network(names, rs);
  }
  return dec;
}

int deficiency(const ReactionNetwork& net)
{
  int m = static_cast<int>(net.complexes.size());
  int l = static_cast<int>(linkage_classes(net).complex_ids.size());
  int s = stoichiometric_subspace(net).dim;
  int def = m - l - s;
  if (def < 0) throw CrnError("Internal", "negative deficiency");
  return def;
}

namespace {

// Is the cone {u : A u >= 0 componentwise} equal to {0}?  A is n x s exact.
bool cone_is_trivial(const RatMat& A, int s)
{
  RatMat At = A;
  if (!nullspace(At).empty()) return false;  // contains a line
  int nrows = static_cast<int>(A.size());
  // Extreme rays lie on (s-1)-fold intersections of constraint boundaries.
  std::vector<int> idx(s - 1 > 0 ? s - 1 : 0);
  std::vector<int> sel;
  auto feasible = [&](const RatVec& w) {
    for (const RatVec& row : A) {
      if (dot(row, w).sign() < 0) return false;
    }
    return true;
  };
  if (s == 1) {
    RatVec w{Rat(1)};
    if (feasible(w)) return false;
    w[0] = Rat(-1);
    return !feasible(w);
  }
  // Enumerate subsets of s-1 rows.
  std::vector<int> comb(s - 1);
  std::function<bool(int, int)> rec = [&](int start, int depth) -> bool {
    if (depth == s - 1) {
      RatMat sub;
      for (int i : comb) sub.push_back(A[i]);
      for (const RatVec& w : nullspace(sub)) {
        RatVec nw = w;
        if (feasible(nw)) return true;
        for (Rat& x : nw) x = -x;
        if (feasible(nw)) return true;
      }
      return false;
    }
    for (int i = start; i < nrows; ++i) {
      comb[depth] = i;
      if (rec(i + 1, depth + 1)) return true;
    }
    return false;
  };
  return !rec(0, 0);
}

}  // namespace

Point2 CompatibilityClass::to_frame(const RatVec& x) const
{
  if (S.dim != 2) throw DimensionUnsupported("frame requires dim S = 2");
  // Solve x - c0 = u1*b1 + u2*b2 using two independent coordinates.
  int n = static_cast<int>(c0.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      RatMat M{{frame_basis[0][i], frame_basis[1][i]},
               {frame_basis[0][j], frame_basis[1][j]}};
      RatVec b{x[i] - c0[i], x[j] - c0[j]};
      RatVec u = solve_square(M, b);
      if (!u.empty()) return {u[0], u[1]};
    }
  }
  throw CrnError("Internal", "degenerate frame basis");
}

RatVec CompatibilityClass::from_frame(const Point2& u) const
{
  RatVec x = c0;
  for (size_t i = 0; i < x.size(); ++i)
    x[i] += u.x * frame_basis[0][i] + u.y * frame_basis[1][i];
  return x;
}

CompatibilityClass compatibility_class(const ReactionNetwork& net, const RatVec& c0)
{
  int n = net.n();
  if (static_cast<int>(c0.size()) != n)
    throw CrnError("InvalidInput", "c0 arity mismatch");
  for (const Rat& x : c0)
    if (x.sign() < 0) throw EmptyClass("c0 has a negative coordinate");
  if (n > 12)
    throw DimensionUnsupported("vertex enumeration capped at 12 species");

  CompatibilityClass cls;
  cls.c0 = c0;
  cls.S = stoichiometric_subspace(net);
  int s = cls.S.dim;
  if (s > 3) throw DimensionUnsupported("dim S > 3 not supported");
  cls.frame_basis = cls.S.basis;

  // Constraint matrix A (n x s): x_i = c0_i + (A u)_i >= 0.
  RatMat A(n, RatVec(s));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < s; ++j) A[i][j] = cls.frame_basis[j][i];

  cls.bounded = s == 0 || cone_is_trivial(A, s);

  // Vertices: every vertex has s linearly independent active constraints, so
  // enumerate coordinate subsets of size s, solve, and filter by feasibility.
  std::vector<RatVec> points;   // u-space solutions
  std::vector<RatVec> xs;       // corresponding class points
  if (s == 0) {
    points.push_back({});
    xs.push_back(c0);
  }
  std::vector<int> comb(s);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == s) {
      RatMat M(s, RatVec(s));
      RatVec b(s);
      for (int r = 0; r < s; ++r) {
        for (int j = 0; j < s; ++j) M[r][j] = A[comb[r]][j];
        b[r] = -c0[comb[r]];
      }
      RatVec u = solve_square(M, b);
      if (u.empty()) return;
      RatVec x = c0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < s; ++j) x[i] += u[j] * A[i][j];
      for (const Rat& xi : x)
        if (xi.sign() < 0) return;
      for (const RatVec& prev : points)
        if (prev == u) return;
      points.push_back(u);
      xs.push_back(x);
      return;
    }
    for (int i = start; i < n; ++i) {
      comb[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  if (s > 0) rec(0, 0);

  for (size_t v = 0; v < points.size(); ++v) {
    ClassVertex cv;
    cv.F = xs[v];
    for (int i = 0; i < n; ++i)
      if (cv.F[i].is_zero()) cv.W.push_back(i);
    if (s == 2) cv.frame = {points[v][0], points[v][1]};
    cls.vertices.push_back(std::move(cv));
  }

  if (s == 2) {
    // Order vertices around the polygon (cosmetic; adjacency is per vertex).
    std::vector<double> cx, cy;
    double mx = 0, my = 0;
    for (const ClassVertex& v : cls.vertices) {
      cx.push_back(v.frame.x.to_double());
      cy.push_back(v.frame.y.to_double());
      mx += cx.back();
      my += cy.back();
    }
    if (!cls.vertices.empty()) {
      mx /= static_cast<double>(cls.vertices.size());
      my /= static_cast<double>(cls.vertices.size());
    }
    std::vector<size_t> order(cls.vertices.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return std::atan2(cy[a] - my, cx[a] - mx) < std::atan2(cy[b] - my, cx[b] - mx);
    });
    std::vector<ClassVertex> sorted;
    for (size_t i : order) sorted.push_back(cls.vertices[i]);
    cls.vertices = std::move(sorted);

    // Annotate each vertex with its two edge directions and the (k,l) data.
    for (ClassVertex& v : cls.vertices) {
      std::vector<int> active = v.W;
      std::vector<Point2> dirs;
      for (int i : active) {
        Point2 a{A[i][0], A[i][1]};
        for (int sgn : {1, -1}) {
          Point2 w{Rat(sgn) * (-a.y), Rat(sgn) * a.x};
          bool ok = true;
          for (int j : active) {
            if ((Rat(A[j][0]) * w.x + Rat(A[j][1]) * w.y).sign() < 0) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          Point2 pw = primitive_direction(w);
          bool dup = false;
          for (const Point2& d : dirs)
            if (d == pw) dup = true;
          if (!dup) dirs.push_back(pw);
        }
      }
      if (dirs.size() != 2) continue;
      RatVec e1(n), e2(n);
      for (int i = 0; i < n; ++i) {
        e1[i] = dirs[0].x * A[i][0] + dirs[0].y * A[i][1];
        e2[i] = dirs[1].x * A[i][0] + dirs[1].y * A[i][1];
      }
      // Try both labelings (v1,v2) = (e1,e2) and (e2,e1); keep the one that
      // admits a pair (k,l) in W1 x W2 with l < k.
      for (int attempt = 0; attempt < 2 && !v.annotated; ++attempt) {
        RatVec p = attempt == 0 ? e1 : e2;
        RatVec q = attempt == 0 ? e2 : e1;
        std::vector<int> W1, W2;
        for (int i : v.W) {
          if (p[i].is_zero()) W1.push_back(i);
          if (q[i].is_zero()) W2.push_back(i);
        }
        bool disjoint = true;
        for (int i : W1)
          for (int j : W2)
            if (i == j) disjoint = false;
        if (!disjoint) continue;
        int bk = -1, bl = -1;
        for (int lb : W2) {
          for (int kb : W1) {
            if (lb < kb) {
              bk = kb;
              bl = lb;
              break;
            }
          }
          if (bk >= 0) break;
        }
        if (bk < 0) continue;
        if (p[bl].sign() <= 0 || q[bk].sign() <= 0) continue;
        Rat sp = Rat(1) / p[bl], sq = Rat(1) / q[bk];
        v.v1 = sp * p;
        v.v2 = sq * q;
        v.W1 = W1;
        v.W2 = W2;
        v.k = bk;
        v.l = bl;
        // Sign pattern: on W the edge directions are nonnegative, vanishing
        // exactly on W1 (resp. W2).
        bool ok = true;
        for (int i : v.W) {
          bool z1 = std::find(W1.begin(), W1.end(), i) != W1.end();
          bool z2 = std::find(W2.begin(), W2.end(), i) != W2.end();
          if (z1 != v.v1[i].is_zero() || (!z1 && v.v1[i].sign() <= 0)) ok = false;
          if (z2 != v.v2[i].is_zero() || (!z2 && v.v2[i].sign() <= 0)) ok = false;
        }
        v.annotated = ok;
      }
    }
  }

  cls.v_min = Rat(0);
  bool have = false;
  for (const ClassVertex& v : cls.vertices) {
    for (const Rat& x : v.F) {
      if (x.sign() > 0 && (!have || x < cls.v_min)) {
        cls.v_min = x;
        have = true;
      }
    }
  }
  return cls;
}

double monomial(const std::vector<double>& c, const Complex& P)
{
  double r = 1.0;
  for (size_t i = 0; i < c.size(); ++i) {
    long long e = P.coeffs[i];
    if (e == 0) continue;  // 0^0 = 1 convention
    r *= std::pow(c[i], static_cast<double>(e));
  }
  return r;
}

bool is_complex_balanced_equilibrium(const ReactionNetwork& net,
                                     const std::vector<double>& rates,
                                     const std::vector<double>& c, double tol)
{
  for (size_t p0 = 0; p0 < net.complexes.size(); ++p0) {
    double in = 0, out = 0;
    for (size_t j = 0; j < net.reactions.size(); ++j) {
      if (net.reactions[j].target == static_cast<int>(p0))
        in += rates[j] * monomial(c, net.source_of(static_cast<int>(j)));
      if (net.reactions[j].source == static_cast<int>(p0))
        out += rates[j] * monomial(c, net.complexes[p0]);
    }
    double scale = std::max(in, out);
    if (scale == 0) continue;
    if (std::abs(in - out) > tol * scale) return false;
  }
  return true;
}

std::vector<double> birch_point(const ReactionNetwork& net,
                                const std::vector<double>& rates,
                                const std::vector<double>& c0, double tol)
{
  int n = net.n();
  // S-perp basis: vectors orthogonal to every reaction vector.
  RatMat rows;
  for (size_t j = 0; j < net.reactions.size(); ++j)
    rows.push_back(net.reaction_vector(static_cast<int>(j)));
  RatMat perp = nullspace(std::move(rows));
  int m = static_cast<int>(net.complexes.size());
  int neq = m + static_cast<int>(perp.size());

  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = std::log(std::max(c0[i], 1e-3));

  auto eval = [&](const Eigen::VectorXd& zz, Eigen::VectorXd& F,
                  Eigen::MatrixXd* J) {
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = std::exp(zz[i]);
    F.setZero(neq);
    if (J) J->setZero(neq, n);
    for (size_t j = 0; j < net.reactions.size(); ++j) {
      const Complex& src = net.source_of(static_cast<int>(j));
      double flow = rates[j] * monomial(c, src);
      int tgt = net.reactions[j].target;
      int sidx = net.reactions[j].source;
      F[tgt] += flow;
      F[sidx] -= flow;
      if (J) {
        for (int i = 0; i < n; ++i) {
          double dz = flow * static_cast<double>(src.coeffs[i]);
          (*J)(tgt, i) += dz;
          (*J)(sidx, i) -= dz;
        }
      }
    }
    for (size_t r = 0; r < perp.size(); ++r) {
      double h = 0;
      for (int i = 0; i < n; ++i)
        h += perp[r][i].to_double() * (c[i] - c0[i]);
      F[m + static_cast<int>(r)] = h;
      if (J)
        for (int i = 0; i < n; ++i)
          (*J)(m + static_cast<int>(r), i) = perp[r][i].to_double() * c[i];
    }
  };

  Eigen::VectorXd F(neq);
  Eigen::MatrixXd J(neq, n);
  eval(z, F, &J);
  double fn = F.norm();
  for (int iter = 0; iter < 200; ++iter) {
    if (F.lpNorm<Eigen::Infinity>() < tol) break;
    Eigen::VectorXd step =
        J.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-F);
    double lam = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      Eigen::VectorXd zt = z + lam * step;
      Eigen::VectorXd Ft(neq);
      eval(zt, Ft, nullptr);
      if (Ft.norm() < fn * (1 - 1e-4 * lam)) {
        z = zt;
        eval(z, F, &J);
        fn = F.norm();
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) break;
  }
  if (F.lpNorm<Eigen::Infinity>() >= tol)
    throw NoConvergence("birch_point residual did not reach tolerance");
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = std::exp(z[i]);
  return c;
}

}  // namespace crn
