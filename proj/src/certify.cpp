// Persistence certification: geometric constants of the compatibility class,
// global parameter selection, the T+ polyhedron, the certification pipeline,
// codimension-2 repulsion reports and global-attractor convergence checks.

#include "crn/certify.hpp"

#include "crn/geometry.hpp"
#include "crn/ratlin.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace crn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double vnorm(const std::vector<double>& v)
{
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double vdot(const std::vector<double>& a, const std::vector<double>& b)
{
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> vsub(const std::vector<double>& a, const std::vector<double>& b)
{
  std::vector<double> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Bilinear form sum_{i in W} a_i b_i (the Z_W distance quadratic).
double wform(const std::vector<double>& a, const std::vector<double>& b,
             const std::vector<int>& W)
{
  double s = 0;
  for (int i : W) s += a[i] * b[i];
  return s;
}

// Minimum of the W-form over unit vectors in the planar cone swept from u1
// to u2 through the shorter arc (angle < pi).
double min_wform_on_cone(const std::vector<double>& u1,
                         const std::vector<double>& u2,
                         const std::vector<int>& W)
{
  double n1 = vnorm(u1);
  if (!(n1 > 0)) throw DomainError("degenerate cone generator");
  std::vector<double> b1(u1);
  for (double& x : b1) x /= n1;
  std::vector<double> b2 = u2;
  double c = vdot(u2, b1);
  for (size_t i = 0; i < b2.size(); ++i) b2[i] -= c * b1[i];
  double n2 = vnorm(b2);
  double g11 = wform(b1, b1, W);
  if (n2 <= 1e-13 * vnorm(u2)) {
    // The generators are parallel: the cone is a single ray.
    return g11;
  }
  for (double& x : b2) x /= n2;
  double g22 = wform(b2, b2, W);
  double g12 = wform(b1, b2, W);
  double theta2 = std::atan2(n2, c);  // in (0, pi)

  auto q = [&](double th) {
    double ct = std::cos(th), st = std::sin(th);
    return g11 * ct * ct + 2 * g12 * ct * st + g22 * st * st;
  };
  double best = std::min(q(0.0), q(theta2));
  // Stationary angles of c0 + e*cos(2t) + f*sin(2t).
  double e = 0.5 * (g11 - g22), f = g12;
  if (e != 0 || f != 0) {
    double base = 0.5 * std::atan2(f, e);
    for (int j = -2; j <= 2; ++j) {
      double th = base + j * (M_PI / 2);
      if (th > 0 && th < theta2) best = std::min(best, q(th));
    }
  }
  return best;
}

bool complex_in_zw(const RatVec& x, const std::vector<int>& W)
{
  for (int i : W)
    if (!x[static_cast<size_t>(i)].is_zero()) return false;
  return true;
}

}  // namespace

double face_distance_delta(const CompatibilityClass& cls,
                           const std::vector<int>& W)
{
  int n = static_cast<int>(cls.c0.size());
  if (W.empty()) throw DomainError("empty index set W");
  for (int i : W)
    if (i < 0 || i >= n) throw DomainError("W index out of range");

  // Degenerate: the whole class lies inside Z_W.
  {
    bool flat = true;
    for (int i : W)
      if (!cls.c0[static_cast<size_t>(i)].is_zero()) flat = false;
    for (const RatVec& b : cls.frame_basis)
      for (int i : W)
        if (!b[static_cast<size_t>(i)].is_zero()) flat = false;
    if (flat) throw DegenerateFace("the class lies inside Z_W");
  }

  std::vector<size_t> face;
  for (size_t v = 0; v < cls.vertices.size(); ++v)
    if (complex_in_zw(cls.vertices[v].F, W)) face.push_back(v);
  if (face.empty()) throw DomainError("F_W is not a face of the class");
  if (face.size() == cls.vertices.size() && cls.dim() >= 1 && cls.bounded)
    throw DegenerateFace("F_W is the whole class");

  if (cls.dim() == 0) throw DegenerateFace("zero-dimensional class inside Z_W");

  if (cls.dim() == 1) {
    const RatVec& vF = cls.vertices[face[0]].F;
    std::vector<double> u;
    if (cls.vertices.size() == 2) {
      size_t other = face[0] == 0 ? 1 : 0;
      u = to_double_vec(cls.vertices[other].F - vF);
    } else {
      // A ray: the basis direction with the feasible sign at the vertex.
      u = to_double_vec(cls.frame_basis[0]);
      for (int i = 0; i < n; ++i)
        if (cls.vertices[face[0]].F[static_cast<size_t>(i)].is_zero() &&
            u[static_cast<size_t>(i)] < 0) {
          for (double& x : u) x = -x;
          break;
        }
    }
    double q = wform(u, u, W) / vdot(u, u);
    if (!(q > 1e-24)) throw DomainError("class direction lies in Z_W");
    return 1.0 / std::sqrt(q);
  }

  if (!cls.bounded)
    throw DomainError("two-dimensional unbounded classes are not supported");
  size_t nv = cls.vertices.size();
  if (nv < 3) throw DomainError("degenerate two-dimensional class");
  auto vert = [&](size_t i) {
    return to_double_vec(cls.vertices[i % nv].F);
  };

  if (face.size() == 1) {
    size_t i = face[0];
    std::vector<double> v0 = vert(i);
    std::vector<double> e1 = vsub(vert(i + 1), v0);
    std::vector<double> e2 = vsub(vert(i + nv - 1), v0);
    double m = min_wform_on_cone(e1, e2, W);
    if (!(m > 1e-24)) throw DomainError("cone direction lies in Z_W");
    return 1.0 / std::sqrt(m);
  }

  if (face.size() == 2) {
    size_t ia = face[0], ib = face[1];
    bool adjacent = ib == ia + 1 || (ia == 0 && ib == nv - 1);
    if (!adjacent) throw DomainError("face vertices are not adjacent");
    if (ia == 0 && ib == nv - 1) std::swap(ia, ib);
    std::vector<double> v1 = vert(ia), v2 = vert(ib);
    std::vector<double> e = vsub(v2, v1);
    double L = vnorm(e);
    std::vector<double> eh(e);
    for (double& x : eh) x /= L;
    // In-plane inward unit normal of the edge, from any off-edge vertex.
    std::vector<double> f;
    for (size_t j = 0; j < nv; ++j) {
      if (j == ia || j == ib) continue;
      f = vsub(vert(j), v1);
      double c = vdot(f, eh);
      for (size_t t = 0; t < f.size(); ++t) f[t] -= c * eh[t];
      if (vnorm(f) > 1e-10 * (1 + vnorm(v1))) break;
    }
    double fn = vnorm(f);
    if (!(fn > 0)) throw DomainError("degenerate polygon");
    for (double& x : f) x /= fn;
    double best = wform(f, f, W);  // interior strip of the edge
    // Beyond each endpoint the distance is to the endpoint itself; the
    // relevant directions form the cone from the inward normal to the next
    // polygon edge.
    std::vector<double> g = vsub(vert(ib + 1), v2);
    if (vdot(g, eh) > 1e-12 * vnorm(g))
      best = std::min(best, min_wform_on_cone(f, g, W));
    std::vector<double> h = vsub(vert(ia + nv - 1), v1);
    if (vdot(h, eh) < -1e-12 * vnorm(h))
      best = std::min(best, min_wform_on_cone(f, h, W));
    if (!(best > 1e-24)) throw DomainError("cone direction lies in Z_W");
    return 1.0 / std::sqrt(best);
  }

  throw DomainError("unexpected face structure");
}

namespace {

// Squared distance from the class to Z_J: minimize |P a + p0|^2 over the
// feasible parameter polyhedron {a : A a + c0 >= 0}.  Exhaustive KKT
// enumeration (unconstrained minimizer or its flat line, every constraint
// line, every constraint pair).
double class_zj_distance2(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& c0, int s,
                          const std::vector<int>& J)
{
  int n = static_cast<int>(c0.size());
  double scale = 1.0;
  for (double x : c0) scale = std::max(scale, std::abs(x));
  double ftol = 1e-10 * scale;
  auto feasible = [&](const std::array<double, 2>& a) {
    for (int i = 0; i < n; ++i) {
      double v = c0[static_cast<size_t>(i)];
      for (int j = 0; j < s; ++j) v += A[static_cast<size_t>(i)][static_cast<size_t>(j)] * a[static_cast<size_t>(j)];
      if (v < -ftol) return false;
    }
    return true;
  };
  // Objective |P a + p0|^2 = a^T G a + 2 g.a + c over the J coordinates.
  // The Gram data drives the solves; the objective itself is evaluated as a
  // direct sum of squares (the expanded quadratic cancels catastrophically
  // near its minimum).
  double G00 = 0, G01 = 0, G11 = 0, g0 = 0, g1 = 0, cc = 0;
  std::vector<std::array<double, 3>> rows;  // (r0, r1, p0) per i in J
  for (int i : J) {
    double r0 = A[static_cast<size_t>(i)][0];
    double r1 = s > 1 ? A[static_cast<size_t>(i)][1] : 0.0;
    double p0 = c0[static_cast<size_t>(i)];
    rows.push_back({r0, r1, p0});
    G00 += r0 * r0;
    G01 += r0 * r1;
    G11 += r1 * r1;
    g0 += r0 * p0;
    g1 += r1 * p0;
    cc += p0 * p0;
  }
  auto quad = [&](const std::array<double, 2>& a) {
    double sum = 0;
    for (const auto& r : rows) {
      double v = r[0] * a[0] + r[1] * a[1] + r[2];
      sum += v * v;
    }
    return sum;
  };

  if (s == 0) return cc;

  if (s == 1) {
    double lo = -kInf, hi = kInf;
    for (int i = 0; i < n; ++i) {
      double r = A[static_cast<size_t>(i)][0], b = -c0[static_cast<size_t>(i)];
      if (std::abs(r) < 1e-14) continue;
      if (r > 0)
        lo = std::max(lo, b / r);
      else
        hi = std::min(hi, b / r);
    }
    double t = 0;
    if (G00 > 1e-14) t = -g0 / G00;
    t = std::min(std::max(t, lo), hi);
    return quad({t, 0});
  }

  double best = kInf;
  double gtrace = G00 + G11;
  double det = G00 * G11 - G01 * G01;
  if (det > 1e-14 * gtrace * gtrace) {
    std::array<double, 2> a{(-g0 * G11 + g1 * G01) / det,
                            (-g1 * G00 + g0 * G01) / det};
    if (feasible(a)) best = std::min(best, quad(a));
  } else if (gtrace > 1e-14) {
    // Rank one: the minimizer set is a line; clip it by the constraints.
    std::array<double, 2> u = G00 >= G11
                                  ? std::array<double, 2>{G00, G01}
                                  : std::array<double, 2>{G01, G11};
    double un = std::sqrt(u[0] * u[0] + u[1] * u[1]);
    u = {u[0] / un, u[1] / un};
    double lam = G00 * u[0] * u[0] + 2 * G01 * u[0] * u[1] + G11 * u[1] * u[1];
    double t0 = -(g0 * u[0] + g1 * u[1]) / lam;
    std::array<double, 2> base{t0 * u[0], t0 * u[1]};
    std::array<double, 2> dir{-u[1], u[0]};
    double lo = -kInf, hi = kInf;
    bool empty = false;
    for (int i = 0; i < n && !empty; ++i) {
      double rb = c0[static_cast<size_t>(i)] + A[static_cast<size_t>(i)][0] * base[0] +
                  A[static_cast<size_t>(i)][1] * base[1];
      double rd = A[static_cast<size_t>(i)][0] * dir[0] + A[static_cast<size_t>(i)][1] * dir[1];
      if (std::abs(rd) < 1e-14) {
        if (rb < -ftol) empty = true;
      } else if (rd > 0) {
        lo = std::max(lo, -rb / rd);
      } else {
        hi = std::min(hi, -rb / rd);
      }
    }
    if (!empty && lo <= hi + 1e-12)
      best = std::min(best, quad(base));
  } else {
    return cc;  // the form vanishes on the whole plane
  }

  // Constraint lines.
  for (int i = 0; i < n; ++i) {
    double r0 = A[static_cast<size_t>(i)][0], r1 = A[static_cast<size_t>(i)][1];
    double nn = r0 * r0 + r1 * r1;
    if (nn < 1e-20) continue;
    double b = -c0[static_cast<size_t>(i)];
    std::array<double, 2> p{b * r0 / nn, b * r1 / nn};
    std::array<double, 2> w{-r1, r0};
    double alpha = G00 * w[0] * w[0] + 2 * G01 * w[0] * w[1] + G11 * w[1] * w[1];
    double beta = w[0] * (G00 * p[0] + G01 * p[1] + g0) +
                  w[1] * (G01 * p[0] + G11 * p[1] + g1);
    if (alpha > 1e-14) {
      double t = -beta / alpha;
      std::array<double, 2> a{p[0] + t * w[0], p[1] + t * w[1]};
      if (feasible(a)) best = std::min(best, quad(a));
    } else if (std::abs(beta) < 1e-12 * (1 + scale)) {
      // Flat along the line: clip its feasible segment.
      double lo = -kInf, hi = kInf;
      bool empty = false;
      for (int j = 0; j < n && !empty; ++j) {
        double rb = c0[static_cast<size_t>(j)] + A[static_cast<size_t>(j)][0] * p[0] +
                    A[static_cast<size_t>(j)][1] * p[1];
        double rd = A[static_cast<size_t>(j)][0] * w[0] + A[static_cast<size_t>(j)][1] * w[1];
        if (std::abs(rd) < 1e-14) {
          if (rb < -ftol) empty = true;
        } else if (rd > 0) {
          lo = std::max(lo, -rb / rd);
        } else {
          hi = std::min(hi, -rb / rd);
        }
      }
      if (!empty && lo <= hi + 1e-12) best = std::min(best, quad(p));
    }
  }

  // Constraint pairs (polygon vertices).
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double a00 = A[static_cast<size_t>(i)][0], a01 = A[static_cast<size_t>(i)][1];
      double a10 = A[static_cast<size_t>(j)][0], a11 = A[static_cast<size_t>(j)][1];
      double dd = a00 * a11 - a01 * a10;
      double sc = std::max({std::abs(a00), std::abs(a01), std::abs(a10),
                            std::abs(a11), 1e-30});
      if (std::abs(dd) < 1e-12 * sc * sc) continue;
      double b0 = -c0[static_cast<size_t>(i)], b1 = -c0[static_cast<size_t>(j)];
      std::array<double, 2> a{(b0 * a11 - a01 * b1) / dd,
                              (a00 * b1 - b0 * a10) / dd};
      if (feasible(a)) best = std::min(best, quad(a));
    }

  return best;
}

}  // namespace

double smallness_lambda(const CompatibilityClass& cls)
{
  int n = static_cast<int>(cls.c0.size());
  int s = cls.dim();
  if (s > 2) throw DimensionUnsupported("smallness constant requires dim S <= 2");
  if (n > 20) throw DimensionUnsupported("subset enumeration capped at 20 species");

  std::vector<double> c0 = to_double_vec(cls.c0);
  std::vector<std::vector<double>> A(static_cast<size_t>(n),
                                     std::vector<double>(static_cast<size_t>(std::max(s, 1)), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < s; ++j)
      A[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          cls.frame_basis[static_cast<size_t>(j)][static_cast<size_t>(i)].to_double();

  double scale = 1.0;
  for (double x : c0) scale = std::max(scale, std::abs(x));
  double tol2 = 1e-18 * scale * scale;

  // Origin in the class: any positive value works.
  std::vector<int> full(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) full[static_cast<size_t>(i)] = i;
  if (class_zj_distance2(A, c0, s, full) <= tol2) return 1.0;

  double best = kInf;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> J;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) J.push_back(i);
    double m2 = class_zj_distance2(A, c0, s, J);
    if (m2 > tol2) best = std::min(best, m2);
  }
  if (!std::isfinite(best))
    throw DomainError("no positive Z_J distance found");
  return std::sqrt(best) / std::sqrt(static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Cylinder seeds and the T+ construction.
// ---------------------------------------------------------------------------

namespace {

Cylinder build_cylinder(const ReactionNetwork& net,
                        const SubnetworkDecomposition& subs, const RatVec& F,
                        const std::vector<int>& W, int l, int k,
                        const RatVec& P, const RatVec& Q)
{
  int n = net.n();
  Cylinder cyl;
  cyl.F = F;
  cyl.W = W;
  std::sort(cyl.W.begin(), cyl.W.end());
  cyl.l = l;
  cyl.k = k;
  cyl.theta_p = P;
  cyl.theta_q = Q;
  for (int i : cyl.W) {
    if (P[static_cast<size_t>(i)].is_zero()) cyl.W1.push_back(i);
    if (Q[static_cast<size_t>(i)].is_zero()) cyl.W2.push_back(i);
  }

  RatVec pw, qw;
  int li = -1, ki = -1;
  for (size_t idx = 0; idx < cyl.W.size(); ++idx) {
    int i = cyl.W[idx];
    pw.push_back(P[static_cast<size_t>(i)]);
    qw.push_back(Q[static_cast<size_t>(i)]);
    if (i == l) li = static_cast<int>(idx);
    if (i == k) ki = static_cast<int>(idx);
  }
  cyl.psi = make_psi(pw, qw, li, ki);

  for (const SubnetworkBlock& blk : subs.blocks) {
    ReducedBlock rb;
    rb.net = project_network(blk.net, {l, k});
    if (rb.net.reactions.size() != blk.net.reactions.size())
      throw DomainError("projection onto {l, k} is not injective on a block");
    // Exponent shift: a = gamma - gamma_l P - gamma_k Q, identical for every
    // complex of the block (the complexes differ by stoichiometric vectors).
    RatVec afull;
    bool first = true;
    for (int ci : blk.complex_ids) {
      const Complex& g = net.complexes[static_cast<size_t>(ci)];
      RatVec cand(static_cast<size_t>(n));
      Rat gl(g.coeffs[static_cast<size_t>(l)]), gk(g.coeffs[static_cast<size_t>(k)]);
      for (int i = 0; i < n; ++i)
        cand[static_cast<size_t>(i)] = Rat(g.coeffs[static_cast<size_t>(i)]) -
                                       gl * P[static_cast<size_t>(i)] -
                                       gk * Q[static_cast<size_t>(i)];
      if (first) {
        afull = cand;
        first = false;
      } else if (cand != afull) {
        throw DomainError("block complexes do not share an exponent shift");
      }
    }
    for (int i : cyl.W) rb.a.push_back(afull[static_cast<size_t>(i)]);
    cyl.blocks.push_back(std::move(rb));
    cyl.parent_reaction.push_back(blk.reaction_ids);
  }
  return cyl;
}

std::vector<Cylinder> make_cylinder_seeds(const CompatibilityClass& cls,
                                          const ReactionNetwork& net)
{
  if (cls.dim() != 2)
    throw DimensionUnsupported("the T+ construction requires dim S = 2");
  for (const ClassVertex& v : cls.vertices)
    if (is_zero_vec(v.F))
      throw OriginVertex("the origin is a vertex of the class");

  SubnetworkDecomposition subs = stoichiometric_subnetworks(net);
  std::vector<Cylinder> out;
  for (const ClassVertex& v : cls.vertices) {
    if (!v.annotated)
      throw SearchExhausted("class vertex lacks the (k, l) annotation");
    for (int a : v.W1)
      for (int b : v.W2) {
        int l = std::min(a, b), k = std::max(a, b);
        RatVec P, Q;
        if (k == a) {  // k carries the vanishing first column
          if (v.v1[static_cast<size_t>(l)].sign() <= 0 ||
              v.v2[static_cast<size_t>(k)].sign() <= 0)
            throw SearchExhausted("edge columns cannot be normalized");
          P = (Rat(1) / v.v1[static_cast<size_t>(l)]) * v.v1;
          Q = (Rat(1) / v.v2[static_cast<size_t>(k)]) * v.v2;
        } else {  // swap the column roles
          if (v.v2[static_cast<size_t>(l)].sign() <= 0 ||
              v.v1[static_cast<size_t>(k)].sign() <= 0)
            throw SearchExhausted("edge columns cannot be normalized");
          P = (Rat(1) / v.v2[static_cast<size_t>(l)]) * v.v2;
          Q = (Rat(1) / v.v1[static_cast<size_t>(k)]) * v.v1;
        }
        out.push_back(build_cylinder(net, subs, v.F, v.W, l, k, P, Q));
      }
  }
  if (out.empty()) throw SearchExhausted("the class has no cylinder vertices");
  return out;
}

// Minimum over the chain boundary of max(x, y): the largest square at the
// origin missing the closed region above the chain.
double chain_clearance(const RegionL& reg)
{
  double best = kInf;
  auto mx = [](double x, double y) { return std::max(x, y); };
  for (size_t i = 0; i + 1 < reg.chain.size(); ++i) {
    const auto& p = reg.chain[i];
    const auto& q = reg.chain[i + 1];
    best = std::min({best, mx(p[0], p[1]), mx(q[0], q[1])});
    double den = (q[0] - p[0]) - (q[1] - p[1]);
    if (std::abs(den) > 0) {
      double t = (p[1] - p[0]) / den;
      if (t > 0 && t < 1) {
        double x = p[0] + t * (q[0] - p[0]);
        best = std::min(best, x);  // on the diagonal x == y
      }
    }
  }
  return best;
}

long long max_molecularity(const ReactionNetwork& net)
{
  long long e = 0;
  for (int ci : net.source_complex_ids())
    e = std::max(e, net.complexes[static_cast<size_t>(ci)].total());
  return e;
}

}  // namespace

TPlusRegion build_t_plus(const CompatibilityClass& cls,
                         const ReactionNetwork& net, double eta, double M,
                         const std::vector<double>& c0)
{
  if (!(eta > 0) || !(eta < 1)) throw DomainError("eta must lie in (0, 1)");
  if (!(M > 1)) throw DomainError("M must exceed 1");
  if (c0.size() != cls.c0.size()) throw DomainError("c0 arity mismatch");

  std::vector<Cylinder> seeds = make_cylinder_seeds(cls, net);
  for (size_t c = 0; c < seeds.size(); ++c)
    for (size_t s = 0; s < seeds[c].blocks.size(); ++s) {
      EndoVerdict v = is_lower_endotactic(seeds[c].blocks[s].net);
      if (!v.ok)
        throw NotLowerEndotactic(
            "projected subnetwork block " + std::to_string(s) +
            " onto {" + std::to_string(seeds[c].l) + ", " +
            std::to_string(seeds[c].k) + "} fails the sweep test");
    }

  GlobalParams gp;
  gp.M = M;
  gp.E = max_molecularity(net);
  gp.lambda = smallness_lambda(cls);
  double vmin = cls.v_min.to_double();
  gp.zeta = std::min({gp.lambda, vmin / 2, 1.0});
  gp.eta_prime =
      std::min(eta * std::pow(gp.zeta, static_cast<double>(gp.E)),
               eta / std::pow(M, static_cast<double>(gp.E)));
  if (!(gp.eta_prime > 0))
    throw SearchExhausted("eta' underflowed to zero");

  // The xi ratio bound over the vertex edge columns.
  double rmax = 1.0;
  double dr_min = kInf;
  for (const ClassVertex& v : cls.vertices) {
    if (!v.annotated) continue;
    for (const RatVec* col : {&v.v1, &v.v2}) {
      double mxc = 0, mnc = kInf;
      for (const Rat& x : *col) {
        double a = std::abs(x.to_double());
        if (a > 0) {
          mxc = std::max(mxc, a);
          mnc = std::min(mnc, a);
        }
      }
      if (mnc < kInf) rmax = std::max(rmax, mxc / mnc);
    }
    // Positive entries on W \ W1 (resp. W \ W2) feed the d bound.
    for (int which = 0; which < 2; ++which) {
      const RatVec& col = which == 0 ? v.v1 : v.v2;
      double mxc = 0, mnc = kInf;
      for (int i : v.W) {
        double a = col[static_cast<size_t>(i)].to_double();
        if (a > 0) {
          mxc = std::max(mxc, a);
          mnc = std::min(mnc, a);
        }
      }
      if (mnc < kInf && mxc > 0) dr_min = std::min(dr_min, mnc / mxc);
    }
  }

  auto build_all = [&](double xi_cap, double d_cap) {
    std::vector<RegionL> regs;
    for (const Cylinder& cyl : seeds)
      regs.push_back(construct_region(
          cyl.blocks, cyl.psi, gp.eta_prime, M,
          std::array<double, 2>{c0[static_cast<size_t>(cyl.l)],
                                c0[static_cast<size_t>(cyl.k)]},
          xi_cap, d_cap));
    return regs;
  };

  // Shared xi: start below the ratio bound and iterate the common cap until
  // every region accepts it.
  double xi_cap = std::min(0.5, vmin / (8 * rmax));
  std::vector<RegionL> regs;
  bool stable = false;
  for (int it = 0; it < 40 && !stable; ++it) {
    regs = build_all(xi_cap, 0.0);
    double mn = kInf;
    for (const RegionL& r : regs) mn = std::min(mn, r.xi);
    if (mn >= xi_cap * (1 - 1e-12))
      stable = true;
    else
      xi_cap = mn;
  }
  if (!stable) throw SearchExhausted("shared xi did not stabilize");
  gp.xi = xi_cap;

  // Epsilon from the d-independent chains.
  double clear = kInf;
  for (const RegionL& r : regs) clear = std::min(clear, chain_clearance(r));
  if (!(clear > 0)) throw SearchExhausted("chain clearance is not positive");
  gp.epsilon = 0.9 * clear;

  // Shared d below the distance/ratio bound.
  double dbound = std::min(gp.lambda, gp.zeta);
  if (dr_min < kInf) dbound = std::min(dbound, gp.epsilon * dr_min);
  double d_cap = 0.999 * dbound;
  stable = false;
  for (int it = 0; it < 40 && !stable; ++it) {
    regs = build_all(xi_cap, d_cap);
    double mn = kInf;
    for (const RegionL& r : regs) {
      mn = std::min(mn, r.d);
      if (std::abs(r.xi - xi_cap) > 1e-12 * xi_cap)
        throw SearchExhausted("xi drifted during the d fixpoint");
    }
    if (mn >= d_cap * (1 - 1e-12))
      stable = true;
    else
      d_cap = mn;
  }
  if (!stable) throw SearchExhausted("shared d did not stabilize");
  gp.d = d_cap;

  TPlusRegion tp;
  tp.params = gp;
  for (size_t c = 0; c < seeds.size(); ++c) {
    seeds[c].region = regs[c];
    tp.cylinders.push_back(std::move(seeds[c]));
  }
  return tp;
}

GlobalParams choose_global_parameters(const CompatibilityClass& cls,
                                      const ReactionNetwork& net, double eta,
                                      double M)
{
  return build_t_plus(cls, net, eta, M, to_double_vec(cls.c0)).params;
}

namespace {

// Signed relative margin of x against every constraint of T+.
double t_plus_margin(const TPlusRegion& tp, const std::vector<double>& x)
{
  double m = kInf;
  double d = tp.params.d;
  for (double xi : x) m = std::min(m, (xi - d) / (1 + d));
  for (const Cylinder& cyl : tp.cylinders) {
    double u = x[static_cast<size_t>(cyl.l)], w = x[static_cast<size_t>(cyl.k)];
    for (const RegionL::Half& h : cyl.region.halves)
      m = std::min(m, (h.ax * u + h.ay * w - h.b) / (std::abs(h.b) + 1));
  }
  return m;
}

}  // namespace

bool t_plus_contains(const TPlusRegion& tp, const std::vector<double>& x,
                     double rel_tol)
{
  return t_plus_margin(tp, x) >= -rel_tol;
}

// ---------------------------------------------------------------------------
// Certification pipeline.
// ---------------------------------------------------------------------------

namespace {

void add_check(PersistenceCertificate& cert, const std::string& name,
               bool passed, double margin, const std::string& detail = "")
{
  cert.checks.push_back({name, passed, margin, detail});
}

bool all_passed(const PersistenceCertificate& cert)
{
  for (const CheckResult& c : cert.checks)
    if (!c.passed) return false;
  return true;
}

std::string witness_string(const EndoVerdict& v)
{
  if (v.ok || !v.witness) return "";
  std::ostringstream os;
  os << "direction (" << v.witness->v.x.str() << ", " << v.witness->v.y.str()
     << ")";
  if (!v.witness->violating.empty()) {
    os << ", reactions";
    for (int r : v.witness->violating) os << " " << r;
  }
  return os.str();
}

// Effective reduced rate kappa * prod_{i not in W} x_i^{P_i} of a parent
// reaction at state x and time t.
double effective_kbar(const ReactionNetwork& net,
                      const std::vector<KappaSchedule>& schedules, int j,
                      const std::vector<int>& W, const std::vector<double>& x,
                      double t)
{
  double v = schedules[static_cast<size_t>(j)].raw_value(t);
  const Complex& P = net.source_of(j);
  for (int i = 0; i < net.n(); ++i) {
    if (std::find(W.begin(), W.end(), i) != W.end()) continue;
    long long e = P.coeffs[static_cast<size_t>(i)];
    if (e != 0) v *= std::pow(x[static_cast<size_t>(i)], static_cast<double>(e));
  }
  return v;
}

}  // namespace

PersistenceCertificate certify_persistence_2d(
    const ReactionNetwork& net, const std::vector<KappaSchedule>& schedules,
    const RatVec& c0, double eta, const CertifyConfig& config)
{
  if (!(eta > 0) || !(eta < 1)) throw DomainError("eta must lie in (0, 1)");
  if (schedules.size() != net.reactions.size())
    throw DomainError("one schedule per reaction expected");

  PersistenceCertificate cert;
  CompatibilityClass cls = compatibility_class(net, c0);
  if (cls.dim() != 2)
    throw DimensionUnsupported("certification requires dim S = 2");
  add_check(cert, "dim_S_is_2", true, 0);

  // Schedule band over the horizon (sampled; breakpoints included).
  {
    double worst = kInf;
    for (size_t j = 0; j < schedules.size(); ++j) {
      std::vector<double> ts;
      for (int i = 0; i <= 1000; ++i)
        ts.push_back(config.sim.horizon * i / 1000.0);
      for (double b : schedules[j].breakpoints(0, config.sim.horizon))
        ts.push_back(b);
      for (double t : ts) {
        double v = schedules[j].raw_value(t);
        worst = std::min({worst, v - eta, 1.0 / eta - v});
      }
    }
    if (!(worst > 0))
      throw RateOutOfBand("a schedule leaves the band (eta, 1/eta)");
    add_check(cert, "schedules_in_band", true, worst);
  }

  // Structural hypothesis: every stoichiometric subnetwork lower-endotactic.
  {
    SubnetworkDecomposition subs = stoichiometric_subnetworks(net);
    for (size_t s = 0; s < subs.blocks.size(); ++s) {
      EndoVerdict v = is_lower_endotactic(subs.blocks[s].net);
      if (!v.ok) {
        add_check(cert, "subnetworks_lower_endotactic", false, -1,
                  "block " + std::to_string(s) + ": " + witness_string(v));
        cert.verdict = PersistenceCertificate::Verdict::Refuted;
        cert.diagnostics = "stoichiometric subnetwork " + std::to_string(s) +
                           " is not lower-endotactic";
        return cert;
      }
    }
    add_check(cert, "subnetworks_lower_endotactic", true, 0);
  }

  // Pilot run: the empirical bound with a safety factor of two.
  std::vector<double> c0d = to_double_vec(c0);
  try {
    cert.trajectory = integrate_mass_action(net, schedules, c0d, config.sim);
  } catch (const CrnError& e) {
    cert.diagnostics = std::string("integration failed: ") + e.what();
    add_check(cert, "pilot_integration", false, -1, e.tag);
    return cert;
  }
  double sup = 0;
  for (const auto& st : cert.trajectory.states)
    for (double x : st) sup = std::max(sup, x);
  cert.M = std::max(2 * sup, 1.5);
  add_check(cert, "pilot_integration", true, cert.M);

  bool origin_vertex = false;
  const ClassVertex* ov = nullptr;
  for (const ClassVertex& v : cls.vertices)
    if (is_zero_vec(v.F)) {
      origin_vertex = true;
      ov = &v;
    }

  double horizon = config.sim.horizon;
  auto dense_times = [&](int count) {
    std::vector<double> ts;
    for (int i = 0; i <= count; ++i) ts.push_back(horizon * i / count);
    return ts;
  };

  try {
    if (origin_vertex) {
      // Reduced route: the whole class is recovered from the (l, k) plane.
      cert.origin_vertex_path = true;
      if (!ov->annotated)
        throw SearchExhausted("origin vertex lacks the (k, l) annotation");
      SubnetworkDecomposition subs = stoichiometric_subnetworks(net);
      std::vector<int> Wall(static_cast<size_t>(net.n()));
      for (int i = 0; i < net.n(); ++i) Wall[static_cast<size_t>(i)] = i;
      Cylinder cyl = build_cylinder(net, subs, ov->F, Wall, ov->l, ov->k,
                                    ov->v1, ov->v2);
      // Attach the parent schedules (unique preimages) with the band.
      for (size_t b = 0; b < cyl.blocks.size(); ++b)
        for (int j : cyl.parent_reaction[b]) {
          KappaSchedule s = schedules[static_cast<size_t>(j)];
          s.eta = eta;
          cyl.blocks[b].kappa.push_back(s);
        }
      cyl.region = construct_region(
          cyl.blocks, cyl.psi, eta, cert.M,
          std::array<double, 2>{c0d[static_cast<size_t>(cyl.l)],
                                c0d[static_cast<size_t>(cyl.k)]});
      cert.params.M = cert.M;
      cert.params.d = cyl.region.d;
      cert.params.xi = cyl.region.xi;
      Reduced2DSystem sys{cyl.blocks, cyl.psi, eta};

      // Containment of the projected trajectory in L+.
      double cmargin = kInf;
      auto check_point = [&](const std::vector<double>& x) {
        double u = x[static_cast<size_t>(cyl.l)], w = x[static_cast<size_t>(cyl.k)];
        for (const RegionL::Half& h : cyl.region.halves)
          cmargin = std::min(cmargin,
                             (h.ax * u + h.ay * w - h.b) / (std::abs(h.b) + 1));
      };
      for (const auto& st : cert.trajectory.states) check_point(st);
      for (double t : dense_times(config.containment_samples))
        check_point(cert.trajectory.sample(t));
      add_check(cert, "containment_in_L_plus", cmargin >= -config.tol, cmargin);

      // Reconstruction x = Psi * (x_l, x_k) stays exact and positive.
      double rmargin = kInf;
      double recon_err = 0;
      for (double t : dense_times(200)) {
        std::vector<double> x = cert.trajectory.sample(t);
        double u = x[static_cast<size_t>(cyl.l)], w = x[static_cast<size_t>(cyl.k)];
        for (int i = 0; i < net.n(); ++i) {
          double ri = cyl.theta_p[static_cast<size_t>(i)].to_double() * u +
                      cyl.theta_q[static_cast<size_t>(i)].to_double() * w;
          recon_err = std::max(recon_err,
                               std::abs(ri - x[static_cast<size_t>(i)]) / (1 + sup));
          rmargin = std::min(rmargin, ri);
        }
      }
      add_check(cert, "reconstruction_consistency", recon_err <= 1e-6,
                1e-6 - recon_err);
      add_check(cert, "reconstruction_positive", rmargin > 0, rmargin);

      // Sampled inward checks on the boundary of L+ inside [0, M]^2.  The
      // outermost chain vertices A0 and A_{e+2} lie outside L+ (beyond the
      // x, y >= d cut), so only the inner segments are sampled.
      int ok = 0, total = 0;
      const RegionL& reg = cyl.region;
      std::vector<std::array<double, 2>> pts;
      for (size_t i = 1; i + 2 < reg.vertices.size(); ++i)
        for (int s = 0; s <= 8; ++s) {
          double t = (s + 0.5) / 9.0;
          pts.push_back({reg.vertices[i][0] +
                             t * (reg.vertices[i + 1][0] - reg.vertices[i][0]),
                         reg.vertices[i][1] +
                             t * (reg.vertices[i + 1][1] - reg.vertices[i][1])});
        }
      // The two half-lines x = d and y = d out to M.
      for (int s = 1; s <= 12; ++s) {
        double t = static_cast<double>(s) / 12.0;
        double y0 = reg.vertices[1][1];
        double xe = reg.vertices[reg.vertices.size() - 2][0];
        pts.push_back({reg.d, y0 + t * (cert.M - y0)});
        pts.push_back({xe + t * (cert.M - xe), reg.d});
      }
      for (const auto& p : pts) {
        if (p[0] > cert.M || p[1] > cert.M) continue;
        for (int ti = 0; ti < config.time_samples; ++ti) {
          double t = horizon * (ti + 0.5) / config.time_samples;
          ++total;
          if (nagumo_check(sys, reg, t, p)) ++ok;
        }
      }
      add_check(cert, "nagumo_samples", ok == total && total > 0,
                static_cast<double>(ok) - total,
                std::to_string(ok) + "/" + std::to_string(total));
      cert.cylinders.push_back(std::move(cyl));
    } else {
      TPlusRegion tp = build_t_plus(cls, net, eta, cert.M, c0d);
      cert.params = tp.params;
      add_check(cert, "c0_in_T_plus", t_plus_contains(tp, c0d, config.tol),
                t_plus_margin(tp, c0d));

      // Trajectory containment at node + dense resolution.
      double cmargin = kInf;
      for (const auto& st : cert.trajectory.states)
        cmargin = std::min(cmargin, t_plus_margin(tp, st));
      for (double t : dense_times(config.containment_samples))
        cmargin = std::min(cmargin, t_plus_margin(tp, cert.trajectory.sample(t)));
      add_check(cert, "containment_in_T_plus", cmargin >= -config.tol, cmargin);

      // Boundary sampling of dT+ within the class plane by ray casting.
      std::vector<double> b0 = to_double_vec(cls.frame_basis[0]);
      std::vector<double> b1 = to_double_vec(cls.frame_basis[1]);
      int decomposed = 0, rays = 0;
      int nagumo_ok = 0, nagumo_total = 0;
      double band_margin = kInf;
      int repair_fail = 0, infinite_pts = 0;
      for (int rj = 0; rj < config.boundary_samples; ++rj) {
        double th = 2 * M_PI * (rj + 0.3) / config.boundary_samples;
        std::vector<double> dir(c0d.size());
        for (size_t i = 0; i < dir.size(); ++i)
          dir[i] = std::cos(th) * b0[i] + std::sin(th) * b1[i];
        auto at = [&](double t) {
          std::vector<double> x = c0d;
          for (size_t i = 0; i < x.size(); ++i) x[i] += t * dir[i];
          return x;
        };
        double lo = 0, hi = 1e-3;
        bool found = false;
        for (int g = 0; g < 80; ++g) {
          if (t_plus_margin(tp, at(hi)) < 0) {
            found = true;
            break;
          }
          lo = hi;
          hi *= 2;
        }
        if (!found) continue;  // numerically unbounded ray; skip
        for (int g = 0; g < 100; ++g) {
          double mid = 0.5 * (lo + hi);
          if (t_plus_margin(tp, at(mid)) >= 0)
            lo = mid;
          else
            hi = mid;
        }
        std::vector<double> xb = at(lo);
        ++rays;

        // Active constraints at the boundary point.
        double act_tol = std::max(1e-9, 2 * std::abs(t_plus_margin(tp, xb)));
        bool on_cylinder = false;
        for (const Cylinder& cyl : tp.cylinders) {
          double u = xb[static_cast<size_t>(cyl.l)];
          double w = xb[static_cast<size_t>(cyl.k)];
          std::vector<const RegionL::Half*> active;
          for (const RegionL::Half& h : cyl.region.halves)
            if ((h.ax * u + h.ay * w - h.b) / (std::abs(h.b) + 1) <= act_tol)
              active.push_back(&h);
          if (active.empty()) continue;
          on_cylinder = true;

          // Finite part: all complement coordinates at least zeta.
          bool finite = true;
          for (int i = 0; i < net.n(); ++i)
            if (std::find(cyl.W.begin(), cyl.W.end(), i) == cyl.W.end() &&
                xb[static_cast<size_t>(i)] < tp.params.zeta * (1 - 1e-9))
              finite = false;
          if (!finite) {
            ++infinite_pts;
            // Re-pairing: the small coordinates embed into some vertex set.
            std::vector<int> I;
            for (int i = 0; i < net.n(); ++i)
              if (xb[static_cast<size_t>(i)] < tp.params.zeta) I.push_back(i);
            bool covered = false;
            for (const ClassVertex& v : cls.vertices) {
              if (!v.annotated) continue;
              bool sub = true;
              for (int i : I)
                if (std::find(v.W.begin(), v.W.end(), i) == v.W.end())
                  sub = false;
              if (sub) covered = true;
            }
            if (!covered) ++repair_fail;
          }

          for (int ti = 0; ti < config.time_samples; ++ti) {
            double t = horizon * (ti + 0.5) / config.time_samples;
            std::vector<double> rates(schedules.size());
            for (size_t j = 0; j < schedules.size(); ++j)
              rates[j] = schedules[j].raw_value(t);
            std::vector<double> f = mass_action_rhs(net, rates, xb);
            double fn = std::max(1.0, vnorm(f));
            for (const RegionL::Half* h : active) {
              ++nagumo_total;
              if (h->ax * f[static_cast<size_t>(cyl.l)] +
                      h->ay * f[static_cast<size_t>(cyl.k)] >=
                  -config.tol * fn)
                ++nagumo_ok;
            }
            if (finite) {
              // Rate-band assertion for the effective reduced rates.
              for (size_t b = 0; b < cyl.parent_reaction.size(); ++b)
                for (int j : cyl.parent_reaction[b]) {
                  double kb = effective_kbar(net, schedules, j, cyl.W, xb, t);
                  band_margin = std::min({band_margin, kb - tp.params.eta_prime,
                                          1.0 / tp.params.eta_prime - kb});
                }
            }
          }
        }
        if (on_cylinder) ++decomposed;
      }
      add_check(cert, "boundary_on_cylinders", decomposed == rays && rays > 0,
                static_cast<double>(decomposed) - rays,
                std::to_string(decomposed) + "/" + std::to_string(rays));
      add_check(cert, "nagumo_samples",
                nagumo_ok == nagumo_total && nagumo_total > 0,
                static_cast<double>(nagumo_ok) - nagumo_total,
                std::to_string(nagumo_ok) + "/" + std::to_string(nagumo_total));
      add_check(cert, "rate_band_on_finite_part",
                band_margin > 0 || !std::isfinite(band_margin),
                std::isfinite(band_margin) ? band_margin : 0,
                std::isfinite(band_margin) ? "" : "no finite-part samples");
      if (infinite_pts > 0)
        add_check(cert, "repairing_covers_small_sets", repair_fail == 0,
                  static_cast<double>(-repair_fail),
                  std::to_string(infinite_pts) + " infinite-part points");
      cert.cylinders = std::move(tp.cylinders);
    }
  } catch (const CrnError& e) {
    cert.diagnostics = std::string("construction failed: ") + e.what();
    add_check(cert, "region_construction", false, -1, e.tag);
    cert.verdict = PersistenceCertificate::Verdict::Inconclusive;
    return cert;
  }

  // Tail metrics.
  try {
    PersistenceMetrics pm =
        persistence_metrics(cert.trajectory, config.tail_fraction);
    cert.tail_min = pm.tail_min;
    cert.liminf_estimate = pm.liminf_estimate;
    double tmin = kInf;
    for (double x : pm.tail_min) tmin = std::min(tmin, x);
    double bound = cert.params.d * (1 - 1e-6);
    add_check(cert, "tail_min_above_d", tmin >= bound && tmin > 0,
              tmin - bound);
  } catch (const TooShort& e) {
    cert.diagnostics = std::string("tail metrics unavailable: ") + e.what();
    add_check(cert, "tail_min_above_d", false, -1, e.tag);
  }

  cert.verdict = all_passed(cert)
                     ? PersistenceCertificate::Verdict::Certified
                     : PersistenceCertificate::Verdict::Inconclusive;
  return cert;
}

// ---------------------------------------------------------------------------
// Codimension-2 repulsion.
// ---------------------------------------------------------------------------

double codim2_tau_factor(const RatVec& vhat1, const RatVec& vhat2, int l,
                         int k, double tau_prime)
{
  if (vhat1.size() != vhat2.size()) throw DomainError("column arity mismatch");
  const Rat& pl = vhat1[static_cast<size_t>(l)];
  const Rat& qk = vhat2[static_cast<size_t>(k)];
  if (pl.sign() <= 0 || qk.sign() <= 0)
    throw DomainError("columns cannot be normalized at (l, k)");
  double B = 0, A = 0;
  for (size_t i = 0; i < vhat1.size(); ++i) {
    B += (vhat1[i] / pl).to_double();
    A += (vhat2[i] / qk).to_double();
  }
  return tau_prime * std::min(A, B) / std::max(A, B);
}

Codim2Report codim2_repulsion(const ReactionNetwork& net,
                              const std::vector<KappaSchedule>& schedules,
                              const RatVec& c0, const std::vector<int>& W,
                              const std::vector<double>& K_lo,
                              const std::vector<double>& K_hi, double eta,
                              const CertifyConfig& config)
{
  int n = net.n();
  if (!is_weakly_reversible(net))
    throw NotWeaklyReversible("codimension-2 repulsion requires weak reversibility");
  if (schedules.size() != net.reactions.size())
    throw DomainError("one schedule per reaction expected");
  if (W.size() != 2) throw FaceNotCodim2("W must contain exactly two species");
  if (static_cast<int>(K_lo.size()) != n || static_cast<int>(K_hi.size()) != n)
    throw DomainError("K bounds must have one entry per species");

  Codim2Report rep;
  rep.W = W;
  std::sort(rep.W.begin(), rep.W.end());

  StoichSubspace S = stoichiometric_subspace(net);
  int s = S.dim;
  if (s < 2 || s > 3)
    throw DimensionUnsupported("codimension-2 faces require dim S in {2, 3}");

  // The face must have codimension two: pi_W restricted to S has rank 2.
  RatMat R(2, RatVec(static_cast<size_t>(s)));
  for (int r = 0; r < 2; ++r)
    for (int j = 0; j < s; ++j)
      R[static_cast<size_t>(r)][static_cast<size_t>(j)] =
          S.basis[static_cast<size_t>(j)][static_cast<size_t>(rep.W[static_cast<size_t>(r)])];
  if (rank(R) != 2) throw FaceNotCodim2("pi_W has rank below two on S");

  // Transverse cone: pi_W(S) cap R^2_{>=0} in the (W[0], W[1]) coordinates is
  // all of the quadrant here (rank 2), so the extreme rays are the axes.
  RatVec v1(2), v2(2);
  v1[0] = Rat(1);
  v2[1] = Rat(1);
  int l = rep.W[0], k = rep.W[1];
  rep.l = l;
  rep.k = k;
  rep.vhat1 = v1;
  rep.vhat2 = v2;

  // Projected network over the W coordinates, decomposed into blocks.
  std::vector<int> Ws = rep.W;
  ReactionNetwork proj = project_network(net, Ws);
  SubnetworkDecomposition psubs = stoichiometric_subnetworks(proj);
  PsiMatrix psi = make_psi(v1, v2, 0, 1);

  std::vector<ReducedBlock> blocks;
  std::vector<std::vector<std::vector<int>>> preimages;  // [block][r] -> ids
  for (const SubnetworkBlock& blk : psubs.blocks) {
    ReducedBlock rb;
    rb.net = blk.net;
    rb.a = RatVec(2);  // psi is the identity here, no shift
    std::vector<std::vector<int>> pre(blk.net.reactions.size());
    for (size_t r = 0; r < blk.net.reactions.size(); ++r) {
      const Complex& src = blk.net.source_of(static_cast<int>(r));
      const Complex& tgt = blk.net.target_of(static_cast<int>(r));
      for (size_t j = 0; j < net.reactions.size(); ++j) {
        Complex ps, pt;
        for (int i : Ws) {
          ps.coeffs.push_back(net.source_of(static_cast<int>(j)).coeffs[static_cast<size_t>(i)]);
          pt.coeffs.push_back(net.target_of(static_cast<int>(j)).coeffs[static_cast<size_t>(i)]);
        }
        if (ps == src && pt == tgt) pre[r].push_back(static_cast<int>(j));
      }
      if (pre[r].empty())
        throw DomainError("projected reaction without a preimage");
    }
    blocks.push_back(std::move(rb));
    preimages.push_back(std::move(pre));
  }

  // Rate band of the lumped reduced rates over the box K.
  double eta_red = eta;
  for (size_t b = 0; b < blocks.size(); ++b)
    for (size_t r = 0; r < blocks[b].net.reactions.size(); ++r) {
      double lo_sum = 0, hi_sum = 0;
      for (int j : preimages[b][r]) {
        double mlo = 1, mhi = 1;
        const Complex& P = net.source_of(j);
        for (int i = 0; i < n; ++i) {
          if (std::find(Ws.begin(), Ws.end(), i) != Ws.end()) continue;
          long long e = P.coeffs[static_cast<size_t>(i)];
          if (e == 0) continue;
          double lo = K_lo[static_cast<size_t>(i)], hi = K_hi[static_cast<size_t>(i)];
          if (!(lo > 0) || !(hi >= lo))
            throw DomainError("K bounds must be positive with lo <= hi");
          mlo *= std::pow(lo, static_cast<double>(e));
          mhi *= std::pow(hi, static_cast<double>(e));
        }
        lo_sum += eta * mlo;
        hi_sum += mhi / eta;
      }
      eta_red = std::min({eta_red, lo_sum, 1.0 / hi_sum});
    }
  if (!(eta_red > 0)) throw SearchExhausted("reduced rate band underflowed");
  rep.eta_reduced = eta_red;

  // Region of the reduced system: tau' and epsilon.
  double Mred = 2;
  {
    double tot = 0;
    for (const Rat& x : c0) tot += x.to_double();
    Mred = std::max(2.0, 2 * tot);
  }
  RegionL reg = construct_region(blocks, psi, eta_red, Mred);
  rep.tau_prime = 1.0;
  if (!reg.ratios.empty())
    rep.tau_prime = std::min({1.0, reg.ratios.front().to_double(),
                              1.0 / reg.ratios.back().to_double()});
  rep.epsilon = 0.9 * chain_clearance(reg);
  rep.tau_factor = codim2_tau_factor(v1, v2, 0, 1, rep.tau_prime);
  rep.checks.push_back({"tau_positive", rep.tau_factor > 0, rep.tau_factor, ""});
  rep.A = rep.B = 0;
  for (const Rat& x : v2) rep.A += x.to_double();
  for (const Rat& x : v1) rep.B += x.to_double();

  // Window starts on the class near the face: a point of K lifted by small
  // multiples of in-S preimages of the transverse rays.
  RatMat Rfull(2, RatVec(static_cast<size_t>(s)));
  for (int r = 0; r < 2; ++r)
    for (int j = 0; j < s; ++j)
      Rfull[static_cast<size_t>(r)][static_cast<size_t>(j)] =
          S.basis[static_cast<size_t>(j)][static_cast<size_t>(rep.W[static_cast<size_t>(r)])];
  auto lift = [&](const RatVec& target) {
    // Solve R x = target through the rref of the augmented system.
    RatMat M = Rfull;
    for (int r = 0; r < 2; ++r) M[static_cast<size_t>(r)].push_back(target[static_cast<size_t>(r)]);
    auto piv = rref(M);
    RatVec x(static_cast<size_t>(s), Rat(0));
    for (size_t r = 0; r < piv.size(); ++r) {
      if (piv[r] >= s) throw DomainError("inconsistent lift");
      x[static_cast<size_t>(piv[r])] = M[r][static_cast<size_t>(s)];
    }
    RatVec full(static_cast<size_t>(n), Rat(0));
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < n; ++i)
        full[static_cast<size_t>(i)] += x[static_cast<size_t>(j)] * S.basis[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return to_double_vec(full);
  };
  RatVec t1(2), t2(2);
  t1[0] = Rat(1);
  t2[1] = Rat(1);
  std::vector<double> V1 = lift(t1), V2 = lift(t2);

  // Face points: solve pi_W(c0 + U a) = 0 and randomize over the kernel.
  std::vector<std::vector<double>> Ud(static_cast<size_t>(s));
  for (int j = 0; j < s; ++j) Ud[static_cast<size_t>(j)] = to_double_vec(S.basis[static_cast<size_t>(j)]);
  RatVec rhs(2);
  rhs[0] = -c0[static_cast<size_t>(l)];
  rhs[1] = -c0[static_cast<size_t>(k)];
  RatMat Maug = Rfull;
  for (int r = 0; r < 2; ++r) Maug[static_cast<size_t>(r)].push_back(rhs[static_cast<size_t>(r)]);
  auto piv = rref(Maug);
  RatVec a0(static_cast<size_t>(s), Rat(0));
  for (size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] >= s) throw DomainError("the face misses the class");
    a0[static_cast<size_t>(piv[r])] = Maug[r][static_cast<size_t>(s)];
  }
  RatMat kern = nullspace(Rfull);  // dimension s - 2 (0 or 1)

  auto face_point = [&](double t) {
    std::vector<double> x = to_double_vec(c0);
    for (int j = 0; j < s; ++j) {
      double coef = a0[static_cast<size_t>(j)].to_double();
      if (!kern.empty()) coef += t * kern[0][static_cast<size_t>(j)].to_double();
      for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] += coef * Ud[static_cast<size_t>(j)][static_cast<size_t>(i)];
    }
    return x;
  };

  // Feasible kernel interval keeping the face point inside the box K.
  double tlo = -kInf, thi = kInf;
  if (kern.empty()) {
    tlo = thi = 0;
  } else {
    for (int i = 0; i < n; ++i) {
      if (std::find(Ws.begin(), Ws.end(), i) != Ws.end()) continue;
      double base = face_point(0)[static_cast<size_t>(i)];
      double slope = face_point(1)[static_cast<size_t>(i)] - base;
      if (std::abs(slope) < 1e-14) {
        if (base < K_lo[static_cast<size_t>(i)] - 1e-9 || base > K_hi[static_cast<size_t>(i)] + 1e-9)
          throw DomainError("K misses the face");
        continue;
      }
      double ta = (K_lo[static_cast<size_t>(i)] - base) / slope;
      double tb = (K_hi[static_cast<size_t>(i)] - base) / slope;
      if (ta > tb) std::swap(ta, tb);
      tlo = std::max(tlo, ta);
      thi = std::min(thi, tb);
    }
    if (!(tlo <= thi)) throw DomainError("K misses the face");
  }

  std::mt19937 rng(config.seed);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  int want = std::max(20, config.boundary_samples / 10);
  rep.worst_ratio = kInf;
  int attempts = 0;
  while (rep.windows_checked < want && attempts < 10 * want) {
    ++attempts;
    double t = tlo + (thi - tlo) * unif(rng);
    std::vector<double> f = face_point(t);
    double ux = rep.epsilon * unif(rng);
    double uy = rep.epsilon * unif(rng);
    std::vector<double> x0 = f;
    bool feas = true;
    for (int i = 0; i < n; ++i) {
      x0[static_cast<size_t>(i)] += ux * V1[static_cast<size_t>(i)] + uy * V2[static_cast<size_t>(i)];
      if (x0[static_cast<size_t>(i)] < 0) feas = false;
    }
    if (!feas) continue;
    Trajectory traj;
    try {
      traj = integrate_mass_action(net, schedules, x0, config.sim);
    } catch (const CrnError&) {
      continue;
    }
    // In-window prefix: complement coordinates inside K, W coordinates
    // below epsilon.  The exit time is located first (window lengths scale
    // with epsilon, so a fixed grid over the horizon could miss them).
    auto inside = [&](double tt) {
      std::vector<double> x = traj.sample(tt);
      for (int i = 0; i < n; ++i) {
        bool inW = std::find(Ws.begin(), Ws.end(), i) != Ws.end();
        double xi = x[static_cast<size_t>(i)];
        if (inW) {
          if (xi > rep.epsilon * (1 + 1e-9)) return false;
        } else {
          if (xi < K_lo[static_cast<size_t>(i)] - 1e-9 ||
              xi > K_hi[static_cast<size_t>(i)] + 1e-9)
            return false;
        }
      }
      return true;
    };
    double t_exit = config.sim.horizon;
    {
      int coarse = 512;
      double prev = 0;
      for (int p = 1; p <= coarse; ++p) {
        double tt = config.sim.horizon * p / coarse;
        if (!inside(tt)) {
          double lo = prev, hi = tt;
          for (int g = 0; g < 40; ++g) {
            double mid = 0.5 * (lo + hi);
            (inside(mid) ? lo : hi) = mid;
          }
          t_exit = lo;
          break;
        }
        prev = tt;
      }
    }
    if (!(t_exit > 0) || !inside(0.0)) continue;
    std::vector<double> sums;
    int npts = 200;
    for (int p = 0; p <= npts; ++p) {
      std::vector<double> x = traj.sample(t_exit * p / npts);
      double sw = 0;
      for (int i : Ws) sw += x[static_cast<size_t>(i)];
      sums.push_back(sw);
    }
    if (sums.size() < 2) continue;
    double prefix_max = sums[0];
    double worst = kInf;
    for (size_t p = 1; p < sums.size(); ++p) {
      worst = std::min(worst, sums[p] / prefix_max);
      prefix_max = std::max(prefix_max, sums[p]);
    }
    ++rep.windows_checked;
    rep.worst_ratio = std::min(rep.worst_ratio, worst);
  }
  if (rep.windows_checked == 0) rep.worst_ratio = 0;
  bool grow_ok = rep.windows_checked > 0 &&
                 rep.worst_ratio >= rep.tau_factor * (1 - 1e-6);
  rep.checks.push_back({"sum_growth_inequality",
                        rep.windows_checked == 0 || grow_ok,
                        rep.windows_checked == 0
                            ? 0
                            : rep.worst_ratio - rep.tau_factor,
                        std::to_string(rep.windows_checked) + " windows"});
  return rep;
}

// ---------------------------------------------------------------------------
// Global attractor check.
// ---------------------------------------------------------------------------

GacReport check_gac(const ReactionNetwork& net,
                    const std::vector<double>& rates,
                    const std::vector<std::vector<double>>& c0_list,
                    double horizon, double tol)
{
  if (!is_weakly_reversible(net))
    throw NotWeaklyReversible("the global attractor check requires weak reversibility");
  if (stoichiometric_subspace(net).dim > 3)
    throw DimensionUnsupported("the global attractor check requires dim S <= 3");
  if (rates.size() != net.reactions.size())
    throw DomainError("one rate per reaction expected");

  // Complex balance: immediate for deficiency zero, otherwise verified at
  // the Birch point of the first class.
  if (deficiency(net) != 0) {
    if (c0_list.empty()) throw DomainError("no starting points supplied");
    std::vector<double> bp = birch_point(net, rates, c0_list[0], 1e-12);
    if (!is_complex_balanced_equilibrium(net, rates, bp, 1e-8))
      throw DomainError("the rate constants are not complex balanced");
  }

  GacReport rep;
  rep.tol = tol;
  rep.all_converged = true;
  std::vector<KappaSchedule> scheds;
  for (double r : rates) scheds.push_back(KappaSchedule::constant(r));
  for (const auto& c0 : c0_list) {
    GacStart st;
    st.c0 = c0;
    st.birch = birch_point(net, rates, c0, 1e-12);
    SimConfig cfg;
    cfg.horizon = horizon;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    Trajectory traj = integrate_mass_action(net, scheds, c0, cfg);
    st.terminal = traj.states.back();
    st.distance = 0;
    for (size_t i = 0; i < st.terminal.size(); ++i)
      st.distance = std::max(st.distance, std::abs(st.terminal[i] - st.birch[i]));
    st.converged = st.distance < tol;
    rep.all_converged = rep.all_converged && st.converged;
    rep.starts.push_back(std::move(st));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON serialization.
// ---------------------------------------------------------------------------

std::string certificate_to_json(const PersistenceCertificate& cert)
{
  nlohmann::json j;
  j["schema_version"] = 1;
  switch (cert.verdict) {
    case PersistenceCertificate::Verdict::Certified: j["verdict"] = "certified"; break;
    case PersistenceCertificate::Verdict::Refuted: j["verdict"] = "refuted"; break;
    default: j["verdict"] = "inconclusive"; break;
  }
  j["origin_vertex_path"] = cert.origin_vertex_path;
  j["M"] = cert.M;
  j["parameters"] = {{"lambda", cert.params.lambda}, {"zeta", cert.params.zeta},
                     {"eta_prime", cert.params.eta_prime},
                     {"xi", cert.params.xi},       {"epsilon", cert.params.epsilon},
                     {"d", cert.params.d},         {"E", cert.params.E},
                     {"M", cert.params.M}};
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : cert.checks)
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"margin", c.margin},
                           {"detail", c.detail}});
  j["cylinders"] = nlohmann::json::array();
  for (const Cylinder& cyl : cert.cylinders) {
    nlohmann::json cj;
    cj["W"] = cyl.W;
    cj["k"] = cyl.k;
    cj["l"] = cyl.l;
    cj["vertex"] = nlohmann::json::array();
    for (const Rat& x : cyl.F) cj["vertex"].push_back(x.to_double());
    cj["region"] = nlohmann::json::parse(region_to_json(cyl.region));
    j["cylinders"].push_back(std::move(cj));
  }
  if (!cert.tail_min.empty()) {
    j["tail_min"] = cert.tail_min;
    j["liminf_estimate"] = cert.liminf_estimate;
  }
  if (!cert.diagnostics.empty()) j["diagnostics"] = cert.diagnostics;
  return j.dump(2);
}

}  // namespace crn
