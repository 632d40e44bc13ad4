#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "kmchev/errors.hpp"
#include "kmchev/wordlang.hpp"
#include <doctest.h>

using namespace kmchev;

namespace {

Gcm gcm(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<IVec> m;
  for (auto& r : rows) {
    IVec row;
    for (long x : r) row.emplace_back(x);
    m.push_back(std::move(row));
  }
  return Gcm::validate(m);
}

const Gcm A2 = gcm({{2, -1}, {-1, 2}});

} // namespace

TEST_CASE("grammar examples") {
  Word w = parse_word(A2, "x(+1,1)*x(-1,1/2)");
  REQUIRE(w.size() == 2);
  CHECK(w[0].kind == Letter::Kind::ChiSimple);
  CHECK(w[0].i == 0);
  CHECK(w[0].sign == Sgn::Plus);
  CHECK(w[0].t == 1);
  CHECK(w[1].sign == Sgn::Minus);
  CHECK(w[1].t == Rat(1, 2));

  Word v = parse_word(A2, "w(2)*h(1,-1)");
  REQUIRE(v.size() == 2);
  CHECK(v[0].kind == Letter::Kind::WTilde);
  CHECK(v[0].i == 1);
  CHECK(v[0].t == 1);
  CHECK(v[1].kind == Letter::Kind::Torus);
  CHECK(v[1].t == -1);

  try {
    parse_word(A2, "x(1,1/0)");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDenominator);
  }
}

TEST_CASE("real root letters") {
  Word w = parse_word(A2, "xr([1,1],2/3)");
  REQUIRE(w.size() == 1);
  CHECK(w[0].kind == Letter::Kind::ChiReal);
  CHECK(w[0].root == RootCoords{Int(1), Int(1)});
  CHECK(w[0].sign == Sgn::Plus);

  Word n = parse_word(A2, "xr([-1,-1],1)");
  CHECK(n[0].sign == Sgn::Minus);
  CHECK(n[0].root == RootCoords{Int(1), Int(1)});

  // simple coordinates collapse to plain chi letters
  Word s = parse_word(A2, "xr([1,0],5)");
  CHECK(s[0].kind == Letter::Kind::ChiSimple);

  try {
    parse_word(A2, "xr([2,0],1)");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotARealRoot);
  }
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_word(A2, "x(1,1)*y(2)");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    CHECK(std::string(e.what()).find("column 8") != std::string::npos);
  }
  try {
    parse_word(A2, "x(3,1)");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
  }
}

TEST_CASE("print-parse round trip") {
  std::vector<std::string> words = {
      "",
      "x(1,1)",
      "x(-2,7/3)*w(1)*h(2,-4/5)",
      "xr([1,1],-2)*w(2,3)*x(2,0)",
      "xr([-1,-1],1/6)",
  };
  for (const auto& s : words) {
    Word w = parse_word(A2, s);
    std::string printed = print_word(w);
    Word again = parse_word(A2, printed);
    CHECK(again == w);
    CHECK(print_word(again) == printed);
  }
}

TEST_CASE("whitespace is tolerated, canonical form has none") {
  Word w = parse_word(A2, "  x( 1 , 1 ) * w( 2 )  ");
  CHECK(print_word(w) == "x(1,1)*w(2)");
}
