#include "crn/parse.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace crn {

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Cursor(const std::string& t) : text(t) {}

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }
  char get()
  {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  [[noreturn]] void fail(const std::string& msg) const
  {
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << msg;
    throw SyntaxError(os.str());
  }
  void skip_space_and_comments(bool stop_at_newline)
  {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') get();
      } else if (c == '\n') {
        if (stop_at_newline) return;
        get();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        return;
      }
    }
  }
};

struct RawTerm {
  long long coeff;
  std::string name;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<RawTerm> parse_complex_terms(Cursor& cur)
{
  std::vector<RawTerm> terms;
  cur.skip_space_and_comments(true);
  if (cur.peek() == '0') {
    cur.get();
    // `0` followed by a name would be a malformed coefficient-0 term.
    if (name_start(cur.peek())) cur.fail("zero coefficient is not allowed");
    return terms;  // the zero complex
  }
  while (true) {
    cur.skip_space_and_comments(true);
    long long coeff = 1;
    if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      coeff = 0;
      while (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        coeff = coeff * 10 + (cur.get() - '0');
        if (coeff > 1000000) cur.fail("stoichiometric coefficient too large");
      }
      if (coeff == 0) cur.fail("zero coefficient is not allowed");
      cur.skip_space_and_comments(true);
    }
    if (!name_start(cur.peek())) cur.fail("expected species name");
    std::string name;
    while (name_char(cur.peek())) name += cur.get();
    terms.push_back({coeff, name});
    cur.skip_space_and_comments(true);
    if (cur.peek() == '+') {
      cur.get();
      continue;
    }
    break;
  }
  return terms;
}

double parse_float(Cursor& cur)
{
  cur.skip_space_and_comments(true);
  std::string s;
  while (!cur.eof() &&
         (std::isdigit(static_cast<unsigned char>(cur.peek())) ||
          cur.peek() == '.' || cur.peek() == '-' || cur.peek() == '+' ||
          cur.peek() == 'e' || cur.peek() == 'E')) {
    s += cur.get();
  }
  if (s.empty()) cur.fail("expected a number");
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) cur.fail("malformed number '" + s + "'");
    return v;
  } catch (const std::exception&) {
    cur.fail("malformed number '" + s + "'");
  }
}

}  // namespace

NetworkDocument parse_network(const std::string& text)
{
  Cursor cur(text);
  std::vector<std::string> species_order;
  std::map<std::string, int> species_id;
  auto intern_species = [&](const std::string& name) {
    auto it = species_id.find(name);
    if (it != species_id.end()) return it->second;
    int id = static_cast<int>(species_order.size());
    species_order.push_back(name);
    species_id[name] = id;
    return id;
  };

  struct RawReaction {
    std::vector<RawTerm> src, tgt;
    std::optional<double> rate;
    bool reversible_twin = false;  // second half of a <-> expansion
  };
  std::vector<RawReaction> raw;

  while (true) {
    cur.skip_space_and_comments(false);
    if (cur.eof()) break;
    if (cur.peek() == ';') {
      cur.get();
      continue;
    }
    std::vector<RawTerm> lhs = parse_complex_terms(cur);
    cur.skip_space_and_comments(true);
    bool reversible = false;
    if (cur.peek() == '<') {
      cur.get();
      if (cur.peek() != '-') cur.fail("expected '<->'");
      cur.get();
      if (cur.peek() != '>') cur.fail("expected '<->'");
      cur.get();
      reversible = true;
    } else if (cur.peek() == '-') {
      cur.get();
      if (cur.peek() != '>') cur.fail("expected '->'");
      cur.get();
    } else {
      cur.fail("expected '->' or '<->'");
    }
    std::vector<RawTerm> rhs = parse_complex_terms(cur);
    cur.skip_space_and_comments(true);
    std::optional<double> k1, k2;
    if (cur.peek() == '@') {
      cur.get();
      cur.skip_space_and_comments(true);
      if (cur.peek() != 'k') cur.fail("expected 'k=' after '@'");
      cur.get();
      cur.skip_space_and_comments(true);
      if (cur.peek() != '=') cur.fail("expected '=' after 'k'");
      cur.get();
      k1 = parse_float(cur);
      cur.skip_space_and_comments(true);
      if (cur.peek() == ',') {
        cur.get();
        k2 = parse_float(cur);
      }
      if (reversible && !k2) cur.fail("'<->' annotation needs two rates");
      if (!reversible && k2) cur.fail("'->' annotation takes one rate");
    }
    cur.skip_space_and_comments(true);
    if (!cur.eof() && cur.peek() != '\n' && cur.peek() != ';')
      cur.fail("unexpected trailing input");
    raw.push_back({lhs, rhs, k1, false});
    if (reversible) raw.push_back({rhs, lhs, k2, true});
  }

  if (raw.empty()) throw EmptyNetwork("no reactions in input");

  // Register species in first-appearance order (left to right).
  for (const RawReaction& r : raw) {
    if (r.reversible_twin) continue;
    for (const RawTerm& t : r.src) intern_species(t.name);
    for (const RawTerm& t : r.tgt) intern_species(t.name);
  }

  int n = static_cast<int>(species_order.size());
  auto to_complex = [&](const std::vector<RawTerm>& terms) {
    Complex c;
    c.coeffs.assign(n, 0);
    for (const RawTerm& t : terms) c.coeffs[species_id[t.name]] += t.coeff;
    return c;
  };

  std::vector<std::pair<Complex, Complex>> pairs;
  for (const RawReaction& r : raw)
    pairs.push_back({to_complex(r.src), to_complex(r.tgt)});

  NetworkDocument doc;
  doc.network = make_network(species_order, pairs);
  for (const RawReaction& r : raw) doc.rate_annotations.push_back(r.rate);
  return doc;
}

std::string format_complex(const ReactionNetwork& net, const Complex& c)
{
  std::string out;
  for (int i = 0; i < net.n(); ++i) {
    long long m = c.coeffs[i];
    if (m == 0) continue;
    if (!out.empty()) out += " + ";
    if (m != 1) out += std::to_string(m);
    out += net.species[i].name;
  }
  return out.empty() ? "0" : out;
}

std::string format_network(const NetworkDocument& doc)
{
  if (doc.network.reactions.empty()) throw EmptyNetwork("nothing to format");
  std::ostringstream os;
  for (size_t j = 0; j < doc.network.reactions.size(); ++j) {
    os << format_complex(doc.network, doc.network.source_of(static_cast<int>(j)))
       << " -> "
       << format_complex(doc.network, doc.network.target_of(static_cast<int>(j)));
    if (j < doc.rate_annotations.size() && doc.rate_annotations[j])
      os << " @ k=" << *doc.rate_annotations[j];
    os << "\n";
  }
  return os.str();
}

}  // namespace crn
