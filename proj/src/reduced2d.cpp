// 2D-reduced systems: comparison curves, Puiseux data, domination constant,
// invariant-region construction and the inward boundary check.

#include "crn/reduced2d.hpp"

#include "crn/geometry.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

namespace crn {

namespace {

long long rat_to_ll(const Rat& r, const char* what)
{
  if (r.den != 1)
    throw DomainError(std::string(what) + " is not an integer: " + r.str());
  if (r.num > std::numeric_limits<long long>::max() ||
      r.num < std::numeric_limits<long long>::min())
    throw DomainError(std::string(what) + " overflows: " + r.str());
  return static_cast<long long>(r.num);
}

// lambda_x = 1 + sum of p_i over pure-x rows, lambda_y = 1 + sum of q_i over
// pure-y rows (rows i outside {l, k}).
std::pair<Rat, Rat> lambdas_xy(const PsiMatrix& psi)
{
  Rat lx(1), ly(1);
  for (int i = 0; i < psi.n(); ++i) {
    if (i == psi.l || i == psi.k) continue;
    if (psi.q[i].is_zero()) lx += psi.p[i];
    if (psi.p[i].is_zero()) ly += psi.q[i];
  }
  return {lx, ly};
}

bool is_mixed_row(const PsiMatrix& psi, int i)
{
  return i != psi.l && i != psi.k && !psi.p[i].is_zero() && !psi.q[i].is_zero();
}

// The constant A' absorbing the pure rows: A^D * prod_{q_i=0} p_i^{-p_i a}
// * prod_{p_i=0} q_i^{q_i b}.  Requires the sign-normalized a > 0, b > 0
// convention of the polynomial form F.
long double a_prime(const LambdaParams& P)
{
  long double v = powl(static_cast<long double>(P.A),
                       static_cast<long double>(P.psi.D));
  for (int i = 0; i < P.psi.n(); ++i) {
    if (i == P.psi.l || i == P.psi.k) continue;
    if (P.psi.q[i].is_zero()) {
      long long e = rat_to_ll(P.psi.p[i] * Rat(P.alpha), "p_i*alpha");
      v *= powl(static_cast<long double>(P.psi.p[i].to_double()),
                static_cast<long double>(-e));
    } else if (P.psi.p[i].is_zero()) {
      long long e = rat_to_ll(P.psi.q[i] * Rat(P.beta), "q_i*beta");
      v *= powl(static_cast<long double>(P.psi.q[i].to_double()),
                static_cast<long double>(e));
    }
  }
  return v;
}

// Zeros are preserved under (alpha, beta, A) -> (-alpha, -beta, 1/A); flip so
// that alpha > 0, or beta <= 0 when alpha == 0.
LambdaParams sign_normalized(const LambdaParams& P)
{
  if (P.alpha < 0 || (P.alpha == 0 && P.beta > 0)) {
    LambdaParams Q = P;
    Q.alpha = -P.alpha;
    Q.beta = -P.beta;
    Q.A = 1.0 / P.A;
    return Q;
  }
  return P;
}

void poly_mul_linear(std::vector<long double>& c, long double a0, long double a1)
{
  std::vector<long double> r(c.size() + 1, 0.0L);
  for (size_t i = 0; i < c.size(); ++i) {
    r[i] += c[i] * a0;
    r[i + 1] += c[i] * a1;
  }
  c = std::move(r);
}

long double poly_eval(const std::vector<long double>& c, long double y)
{
  long double v = 0.0L;
  for (size_t i = c.size(); i-- > 0;) v = v * y + c[i];
  return v;
}

// Polynomial form of Lambda with positive and negative parts kept separate:
// the scale vector gives a per-coefficient magnitude so cancellation can be
// detected coefficient by coefficient (the coefficients span many orders of
// magnitude in x, so a single global threshold would misclassify small ones).
struct FPoly {
  std::vector<long double> coeff;  // pos - neg, ascending powers of y
  std::vector<long double> scale;  // pos + neg
};

// Coefficients (ascending in y) of the polynomial form
//   F_x(y) = A' y^{ly b} prod_mixed (p_i x + q_i y)^{q_i b}
//          - x^{lx a} prod_mixed (p_i x + q_i y)^{p_i a},
// which satisfies sign(Lambda) = -sign(F).  Requires alpha > 0, beta > 0.
FPoly f_coefficients(const LambdaParams& P, long double x)
{
  auto [lx, ly] = lambdas_xy(P.psi);
  long long lyb = rat_to_ll(ly * Rat(P.beta), "lambda_y*beta");
  long long lxa = rat_to_ll(lx * Rat(P.alpha), "lambda_x*alpha");

  std::vector<long double> pos(static_cast<size_t>(lyb) + 1, 0.0L);
  pos.back() = a_prime(P);
  std::vector<long double> neg{powl(x, static_cast<long double>(lxa))};
  for (int i = 0; i < P.psi.n(); ++i) {
    if (!is_mixed_row(P.psi, i)) continue;
    long double pi = P.psi.p[i].to_double(), qi = P.psi.q[i].to_double();
    long long eq = rat_to_ll(P.psi.q[i] * Rat(P.beta), "q_i*beta");
    long long ep = rat_to_ll(P.psi.p[i] * Rat(P.alpha), "p_i*alpha");
    for (long long t = 0; t < eq; ++t) poly_mul_linear(pos, pi * x, qi);
    for (long long t = 0; t < ep; ++t) poly_mul_linear(neg, pi * x, qi);
  }
  FPoly F;
  F.coeff.assign(std::max(pos.size(), neg.size()), 0.0L);
  F.scale.assign(F.coeff.size(), 0.0L);
  for (size_t i = 0; i < pos.size(); ++i) {
    F.coeff[i] += pos[i];
    F.scale[i] += pos[i];
  }
  for (size_t i = 0; i < neg.size(); ++i) {
    F.coeff[i] -= neg[i];
    F.scale[i] += neg[i];
  }
  return F;
}

int sign_changes(const FPoly& f)
{
  int changes = 0, last = 0;
  for (size_t i = 0; i < f.coeff.size(); ++i) {
    long double v = f.coeff[i];
    if (std::abs(v) <= 1e-13L * f.scale[i]) continue;  // cancelled coefficient
    int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

double cauchy_bound(const std::vector<long double>& c)
{
  size_t top = c.size();
  while (top > 0 && c[top - 1] == 0.0L) --top;
  if (top == 0) return 1.0;
  long double m = 0.0L;
  for (size_t i = 0; i + 1 < top; ++i)
    m = std::max(m, std::abs(c[i] / c[top - 1]));
  return static_cast<double>(1.0L + m);
}

template <class F>
double bisect_root(F f, double lo, double hi, int iters = 200)
{
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    if (hi - lo <= 1e-14 * (std::abs(lo) + std::abs(hi))) break;
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// One ordered source pair (alpha, -beta) = D (P - P').
struct DPair {
  long long alpha, beta;
  bool operator<(const DPair& o) const
  {
    return std::tie(alpha, beta) < std::tie(o.alpha, o.beta);
  }
};

std::vector<DPair> source_pairs(const std::vector<ReducedBlock>& blocks,
                                const PsiMatrix& psi)
{
  std::set<DPair> out;
  for (const auto& blk : blocks) {
    std::vector<int> srcs = blk.net.source_complex_ids();
    for (int ia : srcs)
      for (int ib : srcs) {
        if (ia == ib) continue;
        const Complex& P = blk.net.complexes[ia];
        const Complex& Q = blk.net.complexes[ib];
        long long alpha = psi.D * (P.coeffs[0] - Q.coeffs[0]);
        long long beta = psi.D * (Q.coeffs[1] - P.coeffs[1]);
        out.insert({alpha, beta});
      }
  }
  return {out.begin(), out.end()};
}

// Distinct positive ratios alpha/beta over source pairs with alpha*beta > 0,
// sorted increasing.
std::vector<Rat> direction_ratios(const std::vector<DPair>& pairs)
{
  std::vector<Rat> out;
  for (const auto& pr : pairs) {
    if (pr.alpha == 0 || pr.beta == 0) continue;
    if ((pr.alpha > 0) != (pr.beta > 0)) continue;
    Rat r(Int(pr.alpha), Int(pr.beta));
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double norm2(double x, double y) { return std::sqrt(x * x + y * y); }

}  // namespace

void PsiMatrix::validate() const
{
  int nn = static_cast<int>(p.size());
  if (nn < 2 || static_cast<int>(q.size()) != nn)
    throw DomainError("Psi columns must share a length >= 2");
  if (l < 0 || k >= nn || l >= k)
    throw DomainError("Psi indices must satisfy 0 <= l < k < n");
  if (p[l] != Rat(1) || q[k] != Rat(1) || !p[k].is_zero() || !q[l].is_zero())
    throw DomainError("Psi rows l, k must be the identity rows");
  for (int i = 0; i < nn; ++i) {
    if (p[i].sign() < 0 || q[i].sign() < 0)
      throw DomainError("Psi entries must be nonnegative");
    if (p[i].is_zero() && q[i].is_zero())
      throw DomainError("Psi row " + std::to_string(i) + " is zero");
  }
  if (D < 1) throw DomainError("Psi denominator D must be positive");
}

PsiMatrix make_psi(RatVec p, RatVec q, int l, int k)
{
  PsiMatrix psi;
  psi.p = std::move(p);
  psi.q = std::move(q);
  psi.l = l;
  psi.k = k;
  Int d(1);
  for (int i = 0; i < psi.n(); ++i) {
    if (i == l || i == k) continue;
    if (!psi.p[i].is_zero()) d = int_lcm(d, psi.p[i].den);
    if (!psi.q[i].is_zero()) d = int_lcm(d, psi.q[i].den);
  }
  psi.D = rat_to_ll(Rat(d), "D");
  psi.validate();
  return psi;
}

double reduced_rate(const Reduced2DSystem& sys, int block, int reaction,
                    double t, std::array<double, 2> u)
{
  const ReducedBlock& blk = sys.blocks[static_cast<size_t>(block)];
  const Complex& P = blk.net.source_of(reaction);
  double rate = blk.kappa[static_cast<size_t>(reaction)].value(t);
  for (int i = 0; i < sys.psi.n(); ++i) {
    double base = sys.psi.p[i].to_double() * u[0] + sys.psi.q[i].to_double() * u[1];
    double expo = sys.psi.p[i].to_double() * static_cast<double>(P.coeffs[0]) +
                  sys.psi.q[i].to_double() * static_cast<double>(P.coeffs[1]) +
                  (i < static_cast<int>(blk.a.size()) ? blk.a[i].to_double() : 0.0);
    if (base == 0.0 && expo == 0.0) continue;  // 0^0 = 1
    rate *= std::pow(base, expo);
  }
  return rate;
}

std::array<double, 2> reduced2d_rhs(const Reduced2DSystem& sys, double t,
                                    std::array<double, 2> u)
{
  std::array<double, 2> f{0.0, 0.0};
  for (size_t s = 0; s < sys.blocks.size(); ++s) {
    const ReducedBlock& blk = sys.blocks[s];
    for (size_t r = 0; r < blk.net.reactions.size(); ++r) {
      double rate = reduced_rate(sys, static_cast<int>(s), static_cast<int>(r), t, u);
      const Complex& P = blk.net.source_of(static_cast<int>(r));
      const Complex& Q = blk.net.target_of(static_cast<int>(r));
      f[0] += rate * static_cast<double>(Q.coeffs[0] - P.coeffs[0]);
      f[1] += rate * static_cast<double>(Q.coeffs[1] - P.coeffs[1]);
    }
  }
  return f;
}

double lambda_eval(const LambdaParams& params, double x, double y)
{
  if (!(x > 0) || !(y > 0))
    throw DomainError("lambda_eval requires x > 0 and y > 0");
  params.psi.validate();
  long double v = powl(static_cast<long double>(x),
                       static_cast<long double>(params.alpha));
  v *= powl(static_cast<long double>(y), static_cast<long double>(-params.beta));
  for (int i = 0; i < params.psi.n(); ++i) {
    if (i == params.psi.l || i == params.psi.k) continue;
    long long e = rat_to_ll(params.psi.p[i] * Rat(params.alpha) -
                                params.psi.q[i] * Rat(params.beta),
                            "p_i*alpha - q_i*beta");
    if (e == 0) continue;
    long double base = params.psi.p[i].to_double() * x +
                       params.psi.q[i].to_double() * y;
    v *= powl(base, static_cast<long double>(e));
  }
  v -= powl(static_cast<long double>(params.A),
            static_cast<long double>(params.psi.D));
  return static_cast<double>(v);
}

DeltaTriple deltas(const LambdaParams& params)
{
  Rat sp(1), sq(1);  // 1 accounts for the x (resp. y) front factor
  for (int i = 0; i < params.psi.n(); ++i) {
    if (i == params.psi.l || i == params.psi.k) continue;
    sp += params.psi.p[i];
    sq += params.psi.q[i];
  }
  DeltaTriple d;
  d.dbar = sp * Rat(params.alpha);
  d.dbbar = sq * Rat(params.beta);
  d.delta = d.dbar - d.dbbar;
  return d;
}

double lambda_root(const LambdaParams& params, double x)
{
  if (!(x > 0)) throw DomainError("lambda_root requires x > 0");
  LambdaParams P = sign_normalized(params);
  if (P.alpha == 0 && P.beta == 0)
    throw DomainError("lambda_root requires (alpha, beta) != (0, 0)");

  if (P.beta <= 0) {
    // All y-exponents nonnegative: Lambda(x, .) is nondecreasing.
    auto g = [&](double y) { return lambda_eval(P, x, y); };
    double hi = 1.0;
    int guard = 0;
    while (!(g(hi) > 0)) {
      hi *= 2;
      if (++guard > 600) throw NoRoot("Lambda stays nonpositive in y");
    }
    double lo = std::min(1.0, hi);
    guard = 0;
    while (!(g(lo) < 0)) {
      lo *= 0.5;
      if (++guard > 600) throw NoRoot("Lambda stays nonnegative in y");
    }
    return bisect_root(g, lo, hi);
  }

  // alpha > 0, beta > 0: polynomial form.  One sign change means a unique
  // positive root; two sign changes mean the root curve near the origin plus
  // a far branch (uniqueness in the Lemma sense is boxed, not global), so the
  // relevant root is the smallest one.  More changes: inconclusive.
  FPoly F = f_coefficients(P, static_cast<long double>(x));
  int changes = sign_changes(F);
  if (changes == 0) throw NoRoot("no sign change in the polynomial form");
  if (changes > 2)
    throw MultipleRoots("sign analysis inconclusive (" +
                        std::to_string(changes) + " sign changes)");
  auto f = [&](double y) {
    return static_cast<double>(poly_eval(F.coeff, static_cast<long double>(y)));
  };
  // Scan a geometric grid for the first crossing; the constant term is
  // negative, so f < 0 to the left of the smallest root.
  double B = cauchy_bound(F.coeff);
  const int npts = 1600;
  double lo = 0.0, hi = -1.0, prev_y = 0.0;
  for (int i = 0; i <= npts; ++i) {
    double y = B * std::pow(10.0, -250.0 + 250.0 * i / npts);
    if (f(y) > 0) {
      lo = prev_y;
      hi = y;
      break;
    }
    prev_y = y;
  }
  if (hi < 0) {
    if (changes == 1) {  // positive leading coefficient: the root is above B
      double top = B;
      int guard = 0;
      while (!(f(top) > 0)) {
        top *= 2;
        if (++guard > 200) throw NoRoot("polynomial stays nonpositive");
      }
      return bisect_root(f, B, top);
    }
    throw NoRoot("x exceeds the validated root neighborhood");
  }
  return bisect_root(f, lo, hi);
}

Rat tau(const Rat& sigma, const PsiMatrix& psi)
{
  if (sigma.sign() <= 0) throw DomainError("tau requires sigma > 0");
  Rat sp, sq;
  for (int i = 0; i < psi.n(); ++i) {
    sp += psi.p[i];
    sq += psi.q[i];
  }
  auto [lx, ly] = lambdas_xy(psi);
  Rat pivot = sq / sp;
  if (sigma == pivot) return Rat(1);
  if (sigma < pivot) return lx * sigma / (sq - sigma * sp + lx * sigma);
  return Rat(1) + (sigma * sp - sq) / ly;
}

LeadingCoefficient leading_coefficient(const LambdaParams& params)
{
  if (params.alpha == 0 || params.beta == 0 ||
      (params.alpha > 0) != (params.beta > 0))
    throw DomainError("leading_coefficient requires alpha*beta > 0");
  LambdaParams P = sign_normalized(params);
  P.psi.validate();
  DeltaTriple dt = deltas(P);
  auto [lx, ly] = lambdas_xy(P.psi);
  Rat sigma(Int(P.alpha), Int(P.beta));
  LeadingCoefficient out;

  if (dt.delta.is_zero()) {
    // Root curves are exact lines y = gamma x; gamma ranges over the positive
    // roots of the balance polynomial F_1.
    out.delta_zero = true;
    out.tau_value = 1.0;
    FPoly F = f_coefficients(P, 1.0L);
    auto f = [&](double g) {
      return static_cast<double>(poly_eval(F.coeff, static_cast<long double>(g)));
    };
    double B = cauchy_bound(F.coeff);
    int guard = 0;
    while (!(f(B) > 0)) {
      B *= 2;
      if (++guard > 200) throw NoConvergence("no positive balance root found");
    }
    std::vector<double> grid;
    for (int i = 0; i <= 4096; ++i) grid.push_back(B * i / 4096.0);
    for (int i = 0; i <= 512; ++i)
      grid.push_back(B * std::pow(10.0, -12.0 + 12.0 * i / 512.0));
    std::sort(grid.begin(), grid.end());
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      double a = grid[i], b = grid[i + 1];
      if (a == b) continue;
      double fa = f(a), fb = f(b);
      if ((fa < 0) == (fb < 0)) continue;
      double r = bisect_root(f, a, b);
      if (r > 0 &&
          (out.gammas.empty() ||
           std::abs(r - out.gammas.back()) > 1e-9 * (1 + std::abs(r))))
        out.gammas.push_back(r);
    }
    if (out.gammas.empty()) throw NoConvergence("balance root scan found none");
    std::sort(out.gammas.begin(), out.gammas.end());
    return out;
  }

  Rat tau_exact = tau(sigma, P.psi);
  out.tau_value = tau_exact.to_double();

  // Closed form from the lowest-order balance of the polynomial form: the two
  // extreme monomials of F are the only ones of minimal weight.
  long double Ap = a_prime(P);
  long double closed;
  if (dt.delta.sign() > 0) {
    long long lyb = rat_to_ll(ly * Rat(P.beta), "lambda_y*beta");
    long double val = 1.0L / Ap;
    for (int i = 0; i < P.psi.n(); ++i) {
      if (!is_mixed_row(P.psi, i)) continue;
      long long e = rat_to_ll(P.psi.p[i] * Rat(P.alpha) -
                                  P.psi.q[i] * Rat(P.beta),
                              "p_i*alpha - q_i*beta");
      val *= powl(static_cast<long double>(P.psi.p[i].to_double()),
                  static_cast<long double>(e));
    }
    closed = powl(val, 1.0L / static_cast<long double>(lyb));
  } else {
    long long denom =
        rat_to_ll(dt.dbbar - dt.dbar + lx * Rat(P.alpha), "tau denominator");
    long double val = 1.0L / Ap;
    for (int i = 0; i < P.psi.n(); ++i) {
      if (!is_mixed_row(P.psi, i)) continue;
      long long e = rat_to_ll(P.psi.p[i] * Rat(P.alpha) -
                                  P.psi.q[i] * Rat(P.beta),
                              "p_i*alpha - q_i*beta");
      val *= powl(static_cast<long double>(P.psi.q[i].to_double()),
                  static_cast<long double>(e));
    }
    closed = powl(val, 1.0L / static_cast<long double>(denom));
  }

  // Geometric-ladder limit of root(x) / x^tau, cross-validated against the
  // closed form.  The raw ladder error decays like x^theta with theta the
  // exponent gap, which can be small, so an Aitken-accelerated tail is
  // accepted as well.
  double ladder = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> cs;
  double prev_aitken = std::numeric_limits<double>::quiet_NaN();
  double xj = 0.25;
  for (int j = 0; j < 70 && std::isnan(ladder); ++j, xj *= 0.5) {
    double y;
    try {
      y = lambda_root(P, xj);
    } catch (const NoRoot&) {
      continue;
    } catch (const MultipleRoots&) {
      continue;
    }
    double c = y / std::pow(xj, out.tau_value);
    if (!cs.empty() && std::abs(c / cs.back() - 1.0) < 1e-6) ladder = c;
    cs.push_back(c);
    if (cs.size() >= 3) {
      double d1 = cs[cs.size() - 1] - cs[cs.size() - 2];
      double d0 = cs[cs.size() - 2] - cs[cs.size() - 3];
      if (d1 != d0) {
        double ait = cs.back() - d1 * d1 / (d1 - d0);
        if (!std::isnan(prev_aitken) &&
            std::abs(ait / prev_aitken - 1.0) < 1e-6)
          ladder = ait;
        prev_aitken = ait;
      }
    }
  }
  if (std::isnan(ladder))
    throw NoConvergence("leading-coefficient ladder did not stabilize");
  out.C = static_cast<double>(closed);
  if (!(out.C > 0) || !std::isfinite(out.C) ||
      std::abs(ladder / out.C - 1.0) >= 1e-4)
    throw NoConvergence("ladder and closed-form estimates disagree");
  return out;
}

MuResult mu_constant(const std::vector<ReducedBlock>& blocks, const PsiMatrix& psi)
{
  std::vector<DPair> pairs = source_pairs(blocks, psi);
  std::vector<Rat> V = direction_ratios(pairs);
  std::vector<Point2> dirs{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  for (const Rat& r : V) dirs.push_back({Rat(1), r});

  MuResult out;
  out.mu = 1.0;
  for (size_t s = 0; s < blocks.size(); ++s) {
    const ReactionNetwork& net = blocks[s].net;
    for (const Point2& nd : dirs) {
      // Essential reactions for the sweep direction, exact arithmetic.
      std::vector<int> ess;
      Rat minsup;
      bool first = true;
      for (size_t r = 0; r < net.reactions.size(); ++r) {
        const Complex& P = net.source_of(static_cast<int>(r));
        const Complex& Q = net.target_of(static_cast<int>(r));
        Point2 diff{Rat(Q.coeffs[0] - P.coeffs[0]), Rat(Q.coeffs[1] - P.coeffs[1])};
        if (dot2(nd, diff).is_zero()) continue;
        ess.push_back(static_cast<int>(r));
        Rat sup = nd.x * Rat(P.coeffs[0]) + nd.y * Rat(P.coeffs[1]);
        if (first || sup < minsup) {
          minsup = sup;
          first = false;
        }
      }
      if (ess.empty()) continue;

      int best = -1;
      Rat best_proj;
      for (int r : ess) {
        const Complex& P = net.source_of(r);
        const Complex& Q = net.target_of(r);
        Rat sup = nd.x * Rat(P.coeffs[0]) + nd.y * Rat(P.coeffs[1]);
        if (sup != minsup) continue;
        Rat proj = nd.x * Rat(Q.coeffs[0] - P.coeffs[0]) +
                   nd.y * Rat(Q.coeffs[1] - P.coeffs[1]);
        if (proj.sign() <= 0) continue;
        if (best >= 0) {
          if (proj < best_proj) continue;
          if (proj == best_proj) {
            auto key = [&](int j) {
              return std::make_pair(net.source_of(j).coeffs, net.target_of(j).coeffs);
            };
            if (!(key(r) < key(best))) continue;
          }
        }
        best = r;
        best_proj = proj;
      }
      if (best < 0)
        throw NotLowerEndotactic(
            "no dominating reaction on the support line for direction (" +
            nd.x.str() + ", " + nd.y.str() + ") in block " + std::to_string(s));

      double total = 0.0;
      for (size_t r = 0; r < net.reactions.size(); ++r) {
        const Complex& P = net.source_of(static_cast<int>(r));
        const Complex& Q = net.target_of(static_cast<int>(r));
        total += norm2(static_cast<double>(Q.coeffs[0] - P.coeffs[0]),
                       static_cast<double>(Q.coeffs[1] - P.coeffs[1]));
      }
      // mu_{n,s} = ||n|| sum ||P - P'|| / ((P'_0 - P_0) . n), homogeneous of
      // degree 0 in n.
      double nn = norm2(nd.x.to_double(), nd.y.to_double());
      double mu_ns = nn * total / best_proj.to_double();
      out.mu = std::max(out.mu, mu_ns);
      out.chosen.push_back({nd, static_cast<int>(s), best});
    }
  }
  return out;
}

namespace {

// Per-curve data for the region construction (alpha*beta > 0 pairs,
// sign-normalized so alpha > 0, beta > 0).
struct CurveInfo {
  LambdaParams params;
  Rat tau_exact;
  double tau_d = 1.0;
  LeadingCoefficient lc;
};

double curve_val(double coeff, double tau_d, double x)
{
  return coeff * std::pow(x, tau_d);
}

}  // namespace

RegionL construct_region(const std::vector<ReducedBlock>& blocks,
                         const PsiMatrix& psi, double eta, double M,
                         std::optional<std::array<double, 2>> anchor,
                         double xi_start, double d_start)
{
  psi.validate();
  if (!(eta > 0) || !(eta < 1)) throw DomainError("eta must lie in (0, 1)");
  if (!(M > 1)) throw DomainError("M must exceed 1");
  if (!(xi_start > 0) || d_start < 0)
    throw DomainError("xi_start must be positive and d_start nonnegative");
  for (size_t s = 0; s < blocks.size(); ++s) {
    EndoVerdict v = is_lower_endotactic(blocks[s].net);
    if (!v.ok)
      throw NotLowerEndotactic("block " + std::to_string(s) +
                               " fails the sweep test");
  }

  RegionL reg;
  reg.M = M;
  reg.eta = eta;
  MuResult mu = mu_constant(blocks, psi);
  reg.mu = mu.mu;
  reg.A = mu.mu / (eta * eta);
  reg.chosen = mu.chosen;

  std::vector<DPair> pairs = source_pairs(blocks, psi);
  reg.ratios = direction_ratios(pairs);
  size_t e = reg.ratios.size();
  for (const Rat& r : reg.ratios) reg.taus.push_back(tau(r, psi));

  // Curves for the alpha*beta > 0 pairs (both orders of each source pair give
  // the A and 1/A versions after sign normalization).
  std::vector<CurveInfo> curves;
  for (const DPair& pr : pairs) {
    if (pr.alpha == 0 || pr.beta == 0 || (pr.alpha > 0) != (pr.beta > 0))
      continue;
    CurveInfo ci;
    ci.params = sign_normalized({pr.alpha, pr.beta, reg.A, psi});
    ci.tau_exact = tau(Rat(Int(ci.params.alpha), Int(ci.params.beta)), psi);
    ci.tau_d = ci.tau_exact.to_double();
    ci.lc = leading_coefficient(ci.params);
    curves.push_back(std::move(ci));
  }

  // (P1) band width delta from the extreme leading coefficients.
  double cmin = std::numeric_limits<double>::infinity();
  double cmax = 0.0;
  for (const CurveInfo& ci : curves) {
    cmin = std::min(cmin, ci.lc.min_coeff());
    cmax = std::max(cmax, ci.lc.max_coeff());
  }
  double delta = curves.empty()
                     ? 0.5
                     : std::min({0.45 * cmin, 0.6 / cmax, 0.9});
  if (!curves.empty() && !(delta < 0.5 * cmin && 1.0 / delta > 1.5 * cmax))
    throw SearchExhausted("P1: no band width separates the coefficients");
  reg.delta = delta;

  // Power-curve list for (P2): coefficients {delta, 1/delta} per direction.
  struct PCurve {
    double c;
    Rat tau_exact;
    double tau_d;
  };
  std::vector<PCurve> pcs;
  for (size_t i = 0; i < e; ++i) {
    double td = reg.taus[i].to_double();
    pcs.push_back({delta, reg.taus[i], td});
    pcs.push_back({1.0 / delta, reg.taus[i], td});
  }

  double amark = std::pow(reg.A, static_cast<double>(psi.D));

  // (P2)-(P4): shrink xi until the square [0, xi]^2 is clean.
  double xi = std::min(0.5, xi_start);
  const double floor_tol = 1e-14;
  while (true) {
    bool ok = true;
    // (P2) pairwise curve intersections lie to the right of xi.
    for (size_t a = 0; a < pcs.size() && ok; ++a)
      for (size_t b = a + 1; b < pcs.size() && ok; ++b) {
        if (pcs[a].tau_exact == pcs[b].tau_exact) continue;
        double xs = std::pow(pcs[a].c / pcs[b].c,
                             1.0 / (pcs[b].tau_d - pcs[a].tau_d));
        if (!(xs > xi)) ok = false;
      }
    // (P3) sign of Lambda on the square for alpha*beta <= 0 pairs.
    for (const DPair& pr : pairs) {
      if (!ok) break;
      if (pr.alpha > 0 && pr.beta > 0) continue;
      if (pr.alpha < 0 && pr.beta < 0) continue;
      LambdaParams lp{pr.alpha, pr.beta, reg.A, psi};
      bool want_pos = pr.alpha <= 0 && pr.beta >= 0;
      double margin = 1e-10 * amark;
      for (int gx = 1; gx <= 4 && ok; ++gx)
        for (int gy = 1; gy <= 4 && ok; ++gy) {
          double v = lambda_eval(lp, xi * gx / 4.0, xi * gy / 4.0);
          if (want_pos ? !(v > margin) : !(v < -margin)) ok = false;
        }
    }
    // (P4) Puiseux sandwich along a dyadic ladder.
    for (const CurveInfo& ci : curves) {
      if (!ok) break;
      if (ci.lc.delta_zero) continue;  // exact lines, no sandwich needed
      double x = xi;
      for (int j = 0; j <= 12 && ok; ++j, x *= 0.5) {
        double y;
        try {
          y = lambda_root(ci.params, x);
        } catch (const CrnError&) {
          ok = false;
          break;
        }
        double mid = curve_val(ci.lc.C, ci.tau_d, x);
        if (!(0.5 * mid < y && y < 1.5 * mid)) ok = false;
      }
    }
    if (ok) break;
    xi *= 0.5;
    if (xi < floor_tol)
      throw SearchExhausted("P2/P3/P4: xi under the floor 1e-14");
  }
  reg.xi = xi;

  // Vertex chain A0 ... A_{e+2}: segment i has slope -1/r_i; interior
  // vertices sit strictly between consecutive power curves.
  auto build_chain =
      [&](double y0) -> std::optional<std::vector<std::array<double, 2>>> {
    std::vector<std::array<double, 2>> pts{{0.0, y0}};
    if (e == 0) {
      pts.push_back({y0, 0.0});  // slope -1
      if (y0 > xi) return std::nullopt;
      return pts;
    }
    double cx = 0.0, cy = y0;
    for (size_t i = 0; i < e; ++i) {
      double rd = reg.ratios[i].to_double();
      double xint = cx + rd * cy;
      auto line = [&](double x) { return cy - (x - cx) / rd; };
      if (i + 1 == e) {
        if (xint > xi) return std::nullopt;
        pts.push_back({xint, 0.0});
        break;
      }
      double tu = reg.taus[i].to_double();
      double tl = reg.taus[i + 1].to_double();
      double xR = std::min(xint, xi);
      auto g = [&](double x) { return line(x) - curve_val(delta, tu, x); };
      if (!(g(xR) < 0)) return std::nullopt;  // never crosses inside the square
      double xstar = bisect_root(g, cx, xR);
      auto h = [&](double x) {
        return line(x) - curve_val(1.0 / delta, tl, x);
      };
      double xexit = h(xR) > 0 ? xR : bisect_root(h, xstar, xR);
      double xn = 0.5 * (xstar + xexit);
      double yn = line(xn);
      bool inside = xn > 0 && xn <= xi && yn > 0 && yn <= xi &&
                    yn < curve_val(delta, tu, xn) &&
                    yn > curve_val(1.0 / delta, tl, xn);
      if (!inside) return std::nullopt;
      pts.push_back({xn, yn});
      cx = xn;
      cy = yn;
    }
    return pts;
  };

  double y0 = xi;
  std::vector<std::array<double, 2>> chain;
  while (true) {
    auto c = build_chain(y0);
    bool ok = c.has_value();
    if (ok && anchor) {
      // Shift the region toward the origin until the anchor lies in Lbar+.
      const auto& pts = *c;
      if (!(anchor->at(0) >= 0 && anchor->at(1) >= 0)) ok = false;
      for (size_t i = 0; ok && i + 1 < pts.size(); ++i) {
        double rd = e == 0 ? 1.0 : reg.ratios[i].to_double();
        double b = pts[i][0] + rd * pts[i][1];
        if (!(anchor->at(0) + rd * anchor->at(1) >= b)) ok = false;
      }
    }
    if (ok) {
      chain = *c;
      break;
    }
    y0 *= 0.5;
    // The chain and offset scales shrink with the region (e.g. d must drop
    // below delta^2 y0^2), so their floors are relative to xi.
    if (y0 < floor_tol * xi)
      throw SearchExhausted("chain: no vertex chain above the relative floor");
  }
  reg.chain = chain;

  // (P5)-(P6): offset d from the axes.
  double x2 = chain[1][0];
  double ye = chain[chain.size() - 2][1];
  if (e == 0) ye = y0;
  double d = 0.5 * std::min({xi, x2, ye});
  if (anchor) d = std::min({d, 0.5 * anchor->at(0), 0.5 * anchor->at(1)});
  if (d_start > 0) d = std::min(d, d_start);
  double r1d = e > 0 ? reg.ratios.front().to_double() : 1.0;
  double red = e > 0 ? reg.ratios.back().to_double() : 1.0;
  while (true) {
    bool ok = d > 0;
    double a1y, xe1;
    if (e == 0) {
      ok = ok && d < 0.5 * y0;
      a1y = y0 - d;
      xe1 = y0 - d;
    } else {
      a1y = y0 - d / r1d;
      double xs = chain[chain.size() - 2][0];
      xe1 = xs + red * (ye - d);
      // (P5) the offset vertices sit on the right segments, strictly between
      // the extreme power curves and the axes.
      ok = ok && d < x2 && a1y > 0 &&
           a1y > curve_val(1.0 / delta, reg.taus.front().to_double(), d);
      ok = ok && d < ye &&
           d < curve_val(delta, reg.taus.back().to_double(), xe1);
    }
    // (P6) Lambda signs on the two unbounded sides x = d and y = d.
    if (ok) {
      double margin = 1e-10 * amark;
      auto grid = [&](double lo, double hi, int npts, auto f) {
        if (!(lo < hi)) return true;
        for (int i = 0; i <= npts; ++i) {
          double t = lo * std::pow(hi / lo, static_cast<double>(i) / npts);
          if (!f(t)) return false;
        }
        return true;
      };
      for (const DPair& pr : pairs) {
        if (!ok) break;
        LambdaParams lp{pr.alpha, pr.beta, reg.A, psi};
        if (pr.alpha < 0 && pr.beta >= 0)  // vertical side, flat in y
          ok = lambda_eval(lp, d, M) > margin;
        else if (pr.alpha < 0 && pr.beta < 0)  // vertical side, curve pair
          ok = grid(std::min(xi, std::max(a1y, d)), M, 48, [&](double y) {
            return lambda_eval(lp, d, y) > margin;
          });
        else if (pr.alpha <= 0 && pr.beta > 0)  // horizontal side, flat in x
          ok = lambda_eval(lp, M, d) > margin;
        else if (pr.alpha > 0 && pr.beta > 0)  // horizontal side, curve pair
          ok = grid(std::min(xi, std::max(xe1, d)), M, 48, [&](double x) {
            return lambda_eval(lp, x, d) > margin;
          });
      }
    }
    if (ok) break;
    d *= 0.5;
    if (d < floor_tol * xi * xi)
      throw SearchExhausted("P5/P6: d under the relative floor");
  }
  reg.d = d;

  // Assemble vertices and the half-plane descriptions.
  std::array<double, 2> A1, Ae1;
  if (e == 0) {
    A1 = {d, y0 - d};
    Ae1 = {y0 - d, d};
  } else {
    A1 = {d, y0 - d / r1d};
    double xs = chain[chain.size() - 2][0];
    Ae1 = {xs + red * (ye - d), d};
  }
  reg.vertices.push_back(chain.front());
  reg.vertices.push_back(A1);
  for (size_t i = 1; i + 1 < chain.size(); ++i) reg.vertices.push_back(chain[i]);
  reg.vertices.push_back(Ae1);
  reg.vertices.push_back(chain.back());

  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    double rd = e == 0 ? 1.0 : reg.ratios[i].to_double();
    reg.chain_halves.push_back({1.0, rd, chain[i][0] + rd * chain[i][1]});
  }
  reg.halves = reg.chain_halves;
  reg.halves.push_back({1.0, 0.0, d});
  reg.halves.push_back({0.0, 1.0, d});
  return reg;
}

bool region_contains(const RegionL& region, double x, double y, bool lbar)
{
  const std::vector<RegionL::Half>* hs = lbar ? &region.chain_halves : &region.halves;
  auto sat = [&](const RegionL::Half& h) {
    return h.ax * x + h.ay * y >= h.b - 1e-12 * (std::abs(h.b) + 1.0);
  };
  if (lbar && (x < -1e-12 || y < -1e-12)) return false;
  for (const auto& h : *hs)
    if (!sat(h)) return false;
  return true;
}

bool nagumo_check(const Reduced2DSystem& sys, const RegionL& region, double t,
                  std::array<double, 2> x)
{
  for (const auto& blk : sys.blocks)
    for (const auto& sched : blk.kappa) {
      double v = sched.raw_value(t);
      if (v <= sys.eta || v >= 1.0 / sys.eta)
        throw RateOutOfBand("rate " + std::to_string(v) +
                            " leaves the certified band at t=" + std::to_string(t));
    }
  if (x[0] < -1e-12 || x[1] < -1e-12 || x[0] > region.M * (1 + 1e-12) ||
      x[1] > region.M * (1 + 1e-12))
    throw DomainError("point outside [0, M]^2");

  std::vector<const RegionL::Half*> active;
  for (const auto& h : region.halves) {
    double slack = h.ax * x[0] + h.ay * x[1] - h.b;
    double tol = 1e-9 * (std::abs(h.b) + 1.0);
    if (slack < -tol) throw DomainError("point outside L+");
    if (slack <= tol) active.push_back(&h);
  }
  if (active.empty()) throw DomainError("point not on the boundary chain of L+");

  std::array<double, 2> f = reduced2d_rhs(sys, t, x);
  double fn = norm2(f[0], f[1]);
  double tol = 1e-9 * std::max(1.0, fn);
  for (const auto* h : active)
    if (h->ax * f[0] + h->ay * f[1] < -tol) return false;
  return true;
}

std::string region_to_json(const RegionL& region)
{
  nlohmann::json j;
  j["params"] = {{"delta", region.delta}, {"xi", region.xi}, {"d", region.d},
                 {"M", region.M},         {"eta", region.eta},
                 {"mu", region.mu},       {"A", region.A}};
  j["directions"] = nlohmann::json::array();
  for (size_t i = 0; i < region.ratios.size(); ++i)
    j["directions"].push_back({{"ratio", region.ratios[i].str()},
                               {"ratio_value", region.ratios[i].to_double()},
                               {"tau", region.taus[i].str()},
                               {"tau_value", region.taus[i].to_double()}});
  auto pts = [](const std::vector<std::array<double, 2>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : v) a.push_back({p[0], p[1]});
    return a;
  };
  j["vertices"] = pts(region.vertices);
  j["chain"] = pts(region.chain);
  j["halfplanes"] = nlohmann::json::array();
  for (const auto& h : region.halves)
    j["halfplanes"].push_back({{"a", {h.ax, h.ay}}, {"b", h.b}});
  j["chosen_reactions"] = nlohmann::json::array();
  for (const auto& c : region.chosen)
    j["chosen_reactions"].push_back({{"n", {c.n.x.to_double(), c.n.y.to_double()}},
                                     {"block", c.block},
                                     {"reaction", c.reaction}});
  return j.dump(2);
}

}  // namespace crn
