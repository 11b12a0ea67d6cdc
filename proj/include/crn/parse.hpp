#pragma once

// Text DSL for reaction networks (.crn files) with round-trip formatting.
//
// Grammar: reactions separated by newlines or ';'.  A reaction is
//   <complex> -> <complex> [@ k=<float>]
//   <complex> <-> <complex> [@ k=<float>,<float>]   (expands to two reactions)
// A complex is `0` or `+`-separated terms `[coeff] Name` (positive integer
// coeff, default 1).  `#` starts a comment.  Species order is first
// appearance in the text and is semantic (it fixes coordinate indices).

#include "crn/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crn {

struct NetworkDocument {
  ReactionNetwork network;
  std::vector<std::optional<double>> rate_annotations;  // per reaction
  std::string name;
  std::string comment;

  bool has_rates() const
  {
    for (const auto& r : rate_annotations)
      if (!r) return false;
    return !rate_annotations.empty();
  }
  std::vector<double> rates_or(double fallback) const
  {
    std::vector<double> out;
    for (const auto& r : rate_annotations) out.push_back(r.value_or(fallback));
    return out;
  }
};

NetworkDocument parse_network(const std::string& text);

std::string format_network(const NetworkDocument& doc);

std::string format_complex(const ReactionNetwork& net, const Complex& c);

}  // namespace crn
