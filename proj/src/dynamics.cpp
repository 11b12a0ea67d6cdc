#include "crn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace crn {

namespace {

// Dormand-Prince 4(5) tableau (FSAL).
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order weights coincide with the last a-row; 4th-order weights below.
constexpr double kB4[7] = {5179.0 / 57600, 0,     7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

std::vector<double> axpy(const std::vector<double>& y, double h,
                         const double* w, const std::vector<double> k[7],
                         int stages)
{
  std::vector<double> out = y;
  for (int s = 0; s < stages; ++s) {
    if (w[s] == 0) continue;
    for (size_t i = 0; i < y.size(); ++i) out[i] += h * w[s] * k[s][i];
  }
  return out;
}

}  // namespace

std::vector<double> Trajectory::sample(double t) const
{
  if (times.empty()) throw TooShort("empty trajectory");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t j = static_cast<size_t>(it - times.begin());  // t in [times[j-1], times[j])
  double t0 = times[j - 1], t1 = times[j], h = t1 - t0;
  double s = (t - t0) / h;
  // Cubic Hermite basis on [0, 1].
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  double h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s);
  double h11 = s * s * (s - 1);
  std::vector<double> out(states[j].size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = h00 * states[j - 1][i] + h10 * h * derivs[j - 1][i] +
             h01 * states[j][i] + h11 * h * derivs[j][i];
  return out;
}

std::vector<double> mass_action_rhs(const ReactionNetwork& net,
                                    const std::vector<double>& rates,
                                    const std::vector<double>& c)
{
  if (rates.size() != net.reactions.size())
    throw DomainError("mass_action_rhs: one rate per reaction expected");
  std::vector<double> f(net.n(), 0.0);
  for (size_t j = 0; j < net.reactions.size(); ++j) {
    const Complex& P = net.source_of(static_cast<int>(j));
    const Complex& Q = net.target_of(static_cast<int>(j));
    double v = rates[j] * monomial(c, P);
    if (v == 0) continue;
    for (int i = 0; i < net.n(); ++i)
      f[i] += v * static_cast<double>(Q.coeffs[i] - P.coeffs[i]);
  }
  return f;
}

Trajectory integrate(const Rhs& rhs, const std::vector<double>& c0,
                     const SimConfig& config,
                     const std::vector<double>& breakpoints)
{
  if (config.rel_tol <= 0 || config.abs_tol <= 0 || config.horizon <= 0)
    throw DomainError("integrate: tolerances and horizon must be positive");
  for (double x : c0)
    if (x < 0) throw DomainError("integrate: negative initial condition");

  // Segment boundaries: 0, interior breakpoints, horizon.
  std::vector<double> bounds{0.0};
  for (double b : breakpoints)
    if (b > 0 && b < config.horizon) bounds.push_back(b);
  bounds.push_back(config.horizon);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) { return b - a < 1e-14; }),
               bounds.end());

  Trajectory traj;
  std::vector<double> y = c0;
  std::vector<double> k[7];
  k[0] = rhs(0.0, y);
  traj.times.push_back(0.0);
  traj.states.push_back(y);
  traj.derivs.push_back(k[0]);

  for (size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
    double t = bounds[seg], t_end = bounds[seg + 1];
    k[0] = rhs(t, y);  // re-evaluate at a possible schedule kink
    double h = std::min({config.max_step, (t_end - t) / 10.0, 0.1});
    h = std::max(h, 1e-12);

    while (t < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
      h = std::min(h, t_end - t);
      for (int s = 1; s < 7; ++s)
        k[s] = rhs(t + kC[s] * h, axpy(y, h, kA[s], k, s));
      std::vector<double> y5 = axpy(y, h, kA[6], k, 6);  // == b-row (FSAL)
      std::vector<double> y4 = axpy(y, h, kB4, k, 7);

      double err = 0;
      for (size_t i = 0; i < y.size(); ++i) {
        double sc = config.abs_tol +
                    config.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        double e = (y5[i] - y4[i]) / sc;
        err += e * e;
      }
      err = std::sqrt(err / static_cast<double>(std::max<size_t>(1, y.size())));

      bool negative = false;
      for (double x : y5)
        if (x < -config.abs_tol) negative = true;

      if (err <= 1.0 && !negative) {
        t += h;
        for (double& x : y5)
          if (x < 0) x = 0;  // clamp discretization noise within abs_tol
        y = std::move(y5);
        for (double x : y)
          if (x > config.blowup_bound || !std::isfinite(x))
            throw Blowup("trajectory exceeded blowup bound at t=" +
                         std::to_string(t));
        k[0] = rhs(t, y);  // fresh slope (clamping breaks strict FSAL reuse)
        traj.times.push_back(t);
        traj.states.push_back(y);
        traj.derivs.push_back(k[0]);
        ++traj.steps_accepted;
        double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h = std::min(config.max_step, h * std::clamp(grow, 0.2, 5.0));
      } else {
        ++traj.steps_rejected;
        double shrink = 0.1;  // non-finite error estimate: back off hard
        if (negative)
          shrink = 0.5;
        else if (std::isfinite(err))
          shrink = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        h *= shrink;
        if (h < 1e-14)
          throw StepUnderflow("step size underflow at t=" + std::to_string(t));
      }
    }
  }
  return traj;
}

Trajectory integrate_mass_action(const ReactionNetwork& net,
                                 const std::vector<KappaSchedule>& schedules,
                                 const std::vector<double>& c0,
                                 const SimConfig& config)
{
  if (schedules.size() != net.reactions.size())
    throw DomainError("integrate_mass_action: one schedule per reaction");
  Rhs rhs = [&net, &schedules](double t, const std::vector<double>& c) {
    std::vector<double> rates(schedules.size());
    for (size_t j = 0; j < schedules.size(); ++j) rates[j] = schedules[j].value(t);
    return mass_action_rhs(net, rates, c);
  };
  std::vector<double> knots;
  for (const auto& s : schedules) {
    auto b = s.breakpoints(0, config.horizon);
    knots.insert(knots.end(), b.begin(), b.end());
  }
  return integrate(rhs, c0, config, knots);
}

Trajectory integrate_reduced(const Reduced2DSystem& sys,
                             std::array<double, 2> u0, const SimConfig& config)
{
  Rhs rhs = [&sys](double t, const std::vector<double>& c) {
    auto f = reduced2d_rhs(sys, t, {c[0], c[1]});
    return std::vector<double>{f[0], f[1]};
  };
  std::vector<double> knots;
  for (const auto& block : sys.blocks)
    for (const auto& s : block.kappa) {
      auto b = s.breakpoints(0, config.horizon);
      knots.insert(knots.end(), b.begin(), b.end());
    }
  return integrate(rhs, {u0[0], u0[1]}, config, knots);
}

PersistenceMetrics persistence_metrics(const Trajectory& traj,
                                       double tail_fraction)
{
  if (tail_fraction <= 0 || tail_fraction > 1)
    throw DomainError("persistence_metrics: tail_fraction in (0, 1] expected");
  if (traj.times.size() < 2) throw TooShort("trajectory has fewer than 2 samples");
  int n = traj.dim();
  double t0 = traj.times.front(), t1 = traj.times.back();
  double span = t1 - t0;

  auto window_min = [&](double frac, std::vector<double>& out) {
    double start = t1 - frac * span;
    out.assign(n, std::numeric_limits<double>::infinity());
    size_t count = 0;
    for (size_t s = 0; s < traj.times.size(); ++s) {
      if (traj.times[s] < start) continue;
      ++count;
      for (int i = 0; i < n; ++i) out[i] = std::min(out[i], traj.states[s][i]);
    }
    return count;
  };

  PersistenceMetrics m;
  if (window_min(tail_fraction, m.tail_min) < 10)
    throw TooShort("fewer than 10 samples in the tail window");

  // Deepest halving of the tail that still holds >= 10 samples.
  m.liminf_estimate = m.tail_min;
  double frac = tail_fraction;
  std::vector<double> w;
  while (window_min(frac / 2, w) >= 10) {
    frac /= 2;
    m.liminf_estimate = w;
  }
  return m;
}

Trajectory project_trajectory(const Trajectory& traj, const std::vector<int>& W)
{
  for (int i : W)
    if (i < 0 || i >= traj.dim())
      throw DomainError("project_trajectory: index out of range");
  Trajectory out;
  out.times = traj.times;
  out.steps_accepted = traj.steps_accepted;
  out.steps_rejected = traj.steps_rejected;
  out.states.reserve(traj.states.size());
  out.derivs.reserve(traj.derivs.size());
  for (size_t s = 0; s < traj.states.size(); ++s) {
    std::vector<double> x(W.size()), d(W.size());
    for (size_t j = 0; j < W.size(); ++j) {
      x[j] = traj.states[s][W[j]];
      d[j] = traj.derivs[s][W[j]];
    }
    out.states.push_back(std::move(x));
    out.derivs.push_back(std::move(d));
  }
  return out;
}

std::string trajectory_to_csv(const Trajectory& traj,
                              const std::vector<std::string>& names)
{
  if (static_cast<int>(names.size()) != traj.dim())
    throw DomainError("trajectory_to_csv: one name per coordinate");
  std::ostringstream os;
  os << "t";
  for (const auto& name : names) os << ", x_" << name;
  os << "\n";
  char buf[64];
  for (size_t s = 0; s < traj.times.size(); ++s) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.times[s]);
    os << buf;
    for (double x : traj.states[s]) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << ", " << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace crn
