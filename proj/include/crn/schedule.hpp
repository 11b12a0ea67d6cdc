#pragma once

// Time-dependent rate constants: piecewise-differentiable schedules with an
// optional declared band (eta, 1/eta) that is enforced at evaluation time.

#include "crn/errors.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace crn {

struct KappaSchedule {
  enum class Kind { Constant, Sinusoidal, PiecewiseLinear };

  Kind kind = Kind::Constant;
  double base = 1.0;       // constant value, or sinusoid center
  double amplitude = 0.0;  // sinusoid
  double period = 1.0;     // sinusoid
  double phase = 0.0;      // sinusoid
  std::vector<std::pair<double, double>> table;  // (t, value), t increasing
  double eta = 0.0;        // declared band (eta, 1/eta); 0 disables the check

  static KappaSchedule constant(double v, double band = 0.0)
  {
    KappaSchedule s;
    s.kind = Kind::Constant;
    s.base = v;
    s.eta = band;
    return s;
  }

  static KappaSchedule sinusoid(double center, double amp, double per,
                                double ph = 0.0, double band = 0.0)
  {
    KappaSchedule s;
    s.kind = Kind::Sinusoidal;
    s.base = center;
    s.amplitude = amp;
    s.period = per;
    s.phase = ph;
    s.eta = band;
    return s;
  }

  static KappaSchedule piecewise(std::vector<std::pair<double, double>> tbl,
                                 double band = 0.0)
  {
    KappaSchedule s;
    s.kind = Kind::PiecewiseLinear;
    s.table = std::move(tbl);
    s.eta = band;
    return s;
  }

  double raw_value(double t) const
  {
    switch (kind) {
      case Kind::Constant: return base;
      case Kind::Sinusoidal:
        return base + amplitude * std::sin(2 * M_PI * t / period + phase);
      case Kind::PiecewiseLinear: {
        if (table.empty()) return base;
        if (t <= table.front().first) return table.front().second;
        if (t >= table.back().first) return table.back().second;
        for (size_t i = 1; i < table.size(); ++i) {
          if (t <= table[i].first) {
            double t0 = table[i - 1].first, t1 = table[i].first;
            double v0 = table[i - 1].second, v1 = table[i].second;
            double w = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
            return v0 + w * (v1 - v0);
          }
        }
        return table.back().second;
      }
    }
    return base;
  }

  double value(double t) const
  {
    double v = raw_value(t);
    if (eta > 0 && (v <= eta || v >= 1.0 / eta))
      throw RateOutOfBand("schedule value " + std::to_string(v) +
                          " outside (" + std::to_string(eta) + ", " +
                          std::to_string(1.0 / eta) + ") at t=" +
                          std::to_string(t));
    return v;
  }

  // Non-smooth time points inside [t0, t1] (mandatory integrator boundaries).
  std::vector<double> breakpoints(double t0, double t1) const
  {
    std::vector<double> out;
    if (kind == Kind::PiecewiseLinear)
      for (const auto& [t, v] : table) {
        (void)v;
        if (t > t0 && t < t1) out.push_back(t);
      }
    return out;
  }
};

}  // namespace crn
