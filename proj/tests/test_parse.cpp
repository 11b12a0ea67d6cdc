#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crn/parse.hpp"

#include <random>

using namespace crn;

TEST_CASE("parse the 4-species example")
{
  auto doc = parse_network(
      "B+D <-> A+C; A+C -> A+B; A+B -> C+D; 2A -> A+D; 2D -> A+D");
  CHECK(doc.network.species.size() == 4);
  CHECK(doc.network.complexes.size() == 7);
  CHECK(doc.network.reactions.size() == 6);
  CHECK(doc.network.species[0].name == "B");
  CHECK(doc.network.species[1].name == "D");
  CHECK(doc.network.species[2].name == "A");
  CHECK(doc.network.species[3].name == "C");
}

TEST_CASE("zero complex and annotations")
{
  auto doc = parse_network("0 -> A @ k=2.5\nA -> 0 @ k=1");
  REQUIRE(doc.network.reactions.size() == 2);
  CHECK(doc.network.source_of(0).total() == 0);
  REQUIRE(doc.rate_annotations[0].has_value());
  CHECK(*doc.rate_annotations[0] == 2.5);

  auto rev = parse_network("A <-> B @ k=2,1");
  REQUIRE(rev.network.reactions.size() == 2);
  CHECK(*rev.rate_annotations[0] == 2);
  CHECK(*rev.rate_annotations[1] == 1);
}

TEST_CASE("comments and separators")
{
  auto doc = parse_network("# header\nA -> B  # inline\n\n;;\nB -> C");
  CHECK(doc.network.reactions.size() == 2);
}

TEST_CASE("errors carry position info")
{
  CHECK_THROWS_AS(parse_network("A -> A"), SelfLoop);
  CHECK_THROWS_AS(parse_network("A -> B; A -> B"), DuplicateReaction);
  CHECK_THROWS_AS(parse_network(""), EmptyNetwork);
  CHECK_THROWS_AS(parse_network("# only comments\n"), EmptyNetwork);
  try {
    parse_network("A -> B\nB => C");
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_network("A -> "), SyntaxError);
  CHECK_THROWS_AS(parse_network("2 -> B"), SyntaxError);
  CHECK_THROWS_AS(parse_network("A <-> B @ k=1"), SyntaxError);
}

TEST_CASE("round trip: parse(format(x)) == x")
{
  const char* inputs[] = {
      "B+D <-> A+C; A+C -> A+B; A+B -> C+D; 2A -> A+D; 2D -> A+D",
      "0 -> A @ k=2.5; A -> 0 @ k=1",
      "2A + 3B -> C; C -> 2A + 3B",
      "X_1 -> X_2; X_2 -> X_1",
  };
  for (const char* in : inputs) {
    auto doc = parse_network(in);
    auto doc2 = parse_network(format_network(doc));
    CHECK(doc.network.species.size() == doc2.network.species.size());
    for (size_t i = 0; i < doc.network.species.size(); ++i)
      CHECK(doc.network.species[i].name == doc2.network.species[i].name);
    CHECK(doc.network.complexes == doc2.network.complexes);
    REQUIRE(doc.network.reactions.size() == doc2.network.reactions.size());
    for (size_t j = 0; j < doc.network.reactions.size(); ++j) {
      CHECK(doc.network.reactions[j] == doc2.network.reactions[j]);
      CHECK(doc.rate_annotations[j] == doc2.rate_annotations[j]);
    }
  }
}

TEST_CASE("coefficient 1 prints without the coefficient")
{
  auto doc = parse_network("1A + 2B -> C");
  std::string out = format_network(doc);
  CHECK(out.find("1A") == std::string::npos);
  CHECK(out.find("A + 2B -> C") != std::string::npos);
}

TEST_CASE("fuzz: random valid inputs never crash, invalid ones throw cleanly")
{
  std::mt19937 rng(12345);
  const char* names[] = {"A", "B", "C", "Dx", "E_2"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    int nr = 1 + static_cast<int>(rng() % 4);
    for (int r = 0; r < nr; ++r) {
      auto complex = [&]() {
        int terms = static_cast<int>(rng() % 3);
        if (terms == 0) return std::string("0");
        std::string s;
        for (int t = 0; t < terms; ++t) {
          if (t) s += " + ";
          int coef = static_cast<int>(rng() % 3) + 1;
          if (coef > 1) s += std::to_string(coef);
          s += names[rng() % 5];
        }
        return s;
      };
      text += complex() + (rng() % 2 ? " -> " : " <-> ") + complex() + "\n";
    }
    try {
      auto doc = parse_network(text);
      auto doc2 = parse_network(format_network(doc));
      CHECK(doc.network.reactions.size() == doc2.network.reactions.size());
    } catch (const CrnError&) {
      // Self loops / duplicates produced by the fuzzer are legitimate errors.
    }
  }
}
