#pragma once

// Shared test utilities: random network generators and independent oracles.

#include "crn/geometry.hpp"
#include "crn/network.hpp"

#include <cmath>
#include <random>
#include <set>
#include <vector>

namespace crn::testing {

inline Complex cx(std::vector<long long> v) { return Complex{std::move(v)}; }

// Random two-species network: random distinct complexes, random reactions.
inline ReactionNetwork random_planar_net(std::mt19937& rng, int max_coord = 3,
                                         int max_reactions = 5)
{
  while (true) {
    std::set<std::pair<long long, long long>> cset;
    int m = 2 + static_cast<int>(rng() % 4);
    while (static_cast<int>(cset.size()) < m)
      cset.insert({static_cast<long long>(rng() % (max_coord + 1)),
                   static_cast<long long>(rng() % (max_coord + 1))});
    std::vector<std::pair<long long, long long>> cs(cset.begin(), cset.end());
    std::set<std::pair<int, int>> rset;
    int nr = 1 + static_cast<int>(rng() % max_reactions);
    for (int t = 0; t < nr * 4 && static_cast<int>(rset.size()) < nr; ++t) {
      int a = static_cast<int>(rng() % cs.size());
      int b = static_cast<int>(rng() % cs.size());
      if (a != b) rset.insert({a, b});
    }
    if (rset.empty()) continue;
    std::vector<std::pair<Complex, Complex>> rs;
    for (auto [a, b] : rset)
      rs.push_back({cx({cs[a].first, cs[a].second}),
                    cx({cs[b].first, cs[b].second})});
    return make_network({"A", "B"}, rs);
  }
}

// Random weakly reversible two-species network: complexes arranged in one or
// two directed cycles.
inline ReactionNetwork random_wr_net(std::mt19937& rng, int max_coord = 3)
{
  while (true) {
    std::set<std::pair<long long, long long>> cset;
    int m = 2 + static_cast<int>(rng() % 4);
    while (static_cast<int>(cset.size()) < m)
      cset.insert({static_cast<long long>(rng() % (max_coord + 1)),
                   static_cast<long long>(rng() % (max_coord + 1))});
    std::vector<std::pair<long long, long long>> cs(cset.begin(), cset.end());
    std::shuffle(cs.begin(), cs.end(), rng);
    std::vector<std::pair<Complex, Complex>> rs;
    size_t split = (cs.size() >= 4 && rng() % 2) ? 2 : cs.size();
    auto add_cycle = [&](size_t lo, size_t hi) {
      if (hi - lo < 2) return;
      for (size_t i = lo; i < hi; ++i) {
        size_t j = i + 1 < hi ? i + 1 : lo;
        rs.push_back({cx({cs[i].first, cs[i].second}),
                      cx({cs[j].first, cs[j].second})});
      }
    };
    if (split == cs.size()) {
      add_cycle(0, cs.size());
    } else {
      add_cycle(0, split);
      add_cycle(split, cs.size());
    }
    if (rs.empty()) continue;
    return make_network({"A", "B"}, rs);
  }
}

// Lift a two-species network onto a plane in three species; with
// `conserve = true` the image lies in a total-mass plane, so aff+ is bounded.
inline ReactionNetwork lift_to_3d(const ReactionNetwork& net2, bool conserve,
                                  long long total = 12)
{
  std::vector<std::pair<Complex, Complex>> rs;
  auto lift = [&](const Complex& c) {
    long long a = c.coeffs[0], b = c.coeffs[1];
    if (conserve) return cx({a, b, total - a - b});
    return cx({a, b, a + b});
  };
  for (size_t j = 0; j < net2.reactions.size(); ++j)
    rs.push_back({lift(net2.source_of(static_cast<int>(j))),
                  lift(net2.target_of(static_cast<int>(j)))});
  return make_network({"A", "B", "C"}, rs);
}

// Brute-force lower-endotacticity oracle: sweep ~720 evenly spaced rational
// directions restricted to iv(aff+(N)).
inline bool brute_force_lower_endotactic(const PlanarNet& pn, int ndirs = 720)
{
  Cone2 iv = pn.inward_cone();
  for (int k = 0; k < ndirs; ++k) {
    double ang = 2 * M_PI * k / ndirs;
    Point2 v{Rat(std::llround(std::cos(ang) * 100000), 100000),
             Rat(std::llround(std::sin(ang) * 100000), 100000)};
    if (v.x.is_zero() && v.y.is_zero()) continue;
    if (!iv.contains(v)) continue;
    if (!sweep_test(pn, v).passed()) return false;
  }
  return true;
}

}  // namespace crn::testing
