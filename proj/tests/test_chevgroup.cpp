#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "kmchev/chevgroup.hpp"
#include "kmchev/errors.hpp"
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

IVec iv(std::initializer_list<long> c) {
  IVec r;
  for (long x : c) r.emplace_back(x);
  return r;
}

const Gcm A1 = gcm({{2}});
const Gcm A2 = gcm({{2, -1}, {-1, 2}});
const Gcm HYP = gcm({{2, -3}, {-3, 2}});

// flatten the operator on the 2-dim sl2 standard module into a 2x2 matrix
// over the ordered basis {v, f v}
std::array<Rat, 4> as2x2(const BlockOperator& op) {
  std::array<Rat, 4> m{Rat(0), Rat(0), Rat(0), Rat(0)};
  auto put = [&](const KVec& src, size_t col) {
    auto row = op.row(src);
    for (const auto& [tk, mat] : row) {
      size_t r = tk[0] == 0 ? 0 : 1;
      m[2 * r + col] = mat.at(0, 0);
    }
  };
  put({0}, 0);
  put({1}, 1);
  return m;
}

} // namespace

TEST_CASE("sl2 generator matrices on the standard module") {
  auto m = TruncatedModule::build(A1, iv({1}), 3);
  Rat t(5, 3);
  auto plus = as2x2(chi_simple(m, 0, Sgn::Plus, t));
  CHECK(plus == std::array<Rat, 4>{1, t, 0, 1});
  auto minus = as2x2(chi_simple(m, 0, Sgn::Minus, t));
  CHECK(minus == std::array<Rat, 4>{1, 0, t, 1});
  auto zero = as2x2(chi_simple(m, 0, Sgn::Plus, Rat(0)));
  CHECK(zero == std::array<Rat, 4>{1, 0, 0, 1});

  auto w = as2x2(wtilde(m, 0, t));
  CHECK(w == std::array<Rat, 4>{0, t, -1 / t, 0});

  auto h = as2x2(torus(m, 0, t));
  CHECK(h == std::array<Rat, 4>{t, 0, 0, 1 / t});
  auto h1 = torus(m, 0, Rat(1));
  CHECK(operator_eq(h1, eval_word(m, {}), 1));
}

TEST_CASE("wtilde squared is h(-1) and torus matches its product form") {
  auto m = TruncatedModule::build(A2, iv({1, 1}), 4);
  for (int i = 0; i < 2; ++i) {
    BlockOperator sq = eval_word(m, {wtilde_letter(i, Rat(1)), wtilde_letter(i, Rat(1))});
    CHECK(operator_eq(sq, torus(m, i, Rat(-1)), 2));
    for (Rat t : {Rat(2), Rat(-1), Rat(1, 2), Rat(-2, 3)}) {
      BlockOperator prod =
          eval_word(m, {wtilde_letter(i, t), wtilde_letter(i, Rat(-1))}); // w(t) w(1)^{-1}
      CHECK(operator_eq(prod, torus(m, i, t), 2));
    }
  }
}

TEST_CASE("torus scalars on fundamental modules") {
  auto m = TruncatedModule::build(A2, iv({1, 0}), 3);
  auto row = torus(m, 0, Rat(7)).row(KVec{0, 0});
  REQUIRE(row.size() == 1);
  CHECK(row.begin()->second.at(0, 0) == 7);
}

TEST_CASE("the paper's SL2 worked example") {
  auto m = TruncatedModule::build(A1, iv({1}), 3);
  Word w1{chi(0, Sgn::Minus, Rat(1)), chi(0, Sgn::Plus, Rat(1))};
  auto m1 = as2x2(eval_word(m, w1));
  CHECK(m1 == std::array<Rat, 4>{1, 1, 1, 2});

  Word w2{chi(0, Sgn::Plus, Rat(1, 2)), torus_letter(0, Rat(1, 2)),
          chi(0, Sgn::Minus, Rat(1, 2))};
  auto m2 = as2x2(eval_word(m, w2));
  CHECK(m2 == std::array<Rat, 4>{1, 1, 1, 2});

  CHECK(operator_eq(eval_word(m, w1), eval_word(m, w2), 1));
}

TEST_CASE("empty word evaluates to the identity") {
  auto m = TruncatedModule::build(A2, iv({1, 1}), 3);
  BlockOperator id = eval_word(m, {});
  for (const auto& [k, ws] : m->spaces()) {
    if (ws.dim == 0) continue;
    auto row = id.row(k);
    REQUIRE(row.size() == 1);
    CHECK(row.begin()->second.is_identity());
  }
}

TEST_CASE("operator_eq distinguishes parameters and accepts equals") {
  auto m = TruncatedModule::build(A1, iv({1}), 3);
  auto a = chi_simple(m, 0, Sgn::Plus, Rat(1));
  auto b = chi_simple(m, 0, Sgn::Plus, Rat(2));
  CHECK(operator_eq(a, a, 1));
  CHECK(!operator_eq(a, b, 1));
}

TEST_CASE("one-parameter subgroup law for real roots") {
  auto m = TruncatedModule::build(A2, iv({1, 1}), 4);
  auto roots = real_roots_up_to_height(A2, 3);
  for (const auto& r : roots) {
    for (auto [s, t] : {std::pair<Rat, Rat>{Rat(1), Rat(2)},
                        {Rat(1, 2), Rat(1, 3)},
                        {Rat(-2), Rat(5, 2)}}) {
      Word lhs{chi_real_letter(r, Sgn::Plus, s), chi_real_letter(r, Sgn::Plus, t)};
      Word rhs{chi_real_letter(r, Sgn::Plus, s + t)};
      CHECK(operator_eq(eval_word(m, lhs), eval_word(m, rhs), 2));
    }
  }
}

TEST_CASE("chi_real block support stays on the root line and integrality holds") {
  auto m = TruncatedModule::build(A2, iv({1, 1}), 4);
  auto roots = real_roots_up_to_height(A2, 2);
  const RealRoot& theta = roots[2]; // alpha_1 + alpha_2
  REQUIRE(theta.coords == RootCoords{Int(1), Int(1)});
  auto op = chi_real(m, theta, Sgn::Plus, Rat(1));
  for (const auto& [k, ws] : m->spaces()) {
    if (ws.dim == 0) continue;
    long s = k[0] + k[1];
    if (s > 2) continue;
    auto row = op.row(k);
    for (const auto& [tk, mat] : row) {
      // target must be k - j * theta for j >= 0
      long d0 = k[0] - tk[0], d1 = k[1] - tk[1];
      CHECK(d0 == d1);
      CHECK(d0 >= 0);
      // integral vectors map to integral vectors (Lemma 6.1 content at t=1)
      CHECK(mat.is_integer());
    }
  }
}

TEST_CASE("wtilde maps the highest-weight line to the reflected weight line") {
  auto m = TruncatedModule::build(A2, iv({1, 0}), 3);
  auto op = wtilde(m, 0, Rat(1));
  auto row = op.row(KVec{0, 0});
  REQUIRE(row.size() == 1);
  // w_1(omega_1) = omega_1 - alpha_1
  CHECK(row.begin()->first == KVec{1, 0});
}

TEST_CASE("wtilde conjugation sends chi to the reflected root with unit scale") {
  auto m = TruncatedModule::build(A2, iv({1, 1}), 4);
  auto roots = real_roots_up_to_height(A2, 2);
  const RealRoot& theta = roots[2];
  // wtilde_1^{-1} chi_{alpha_2}(t) wtilde_1 = chi_theta(eps t)
  Rat t(3, 2);
  Word conj{wtilde_letter(0, Rat(-1)), chi(1, Sgn::Plus, t), wtilde_letter(0, Rat(1))};
  bool matched = false;
  for (Rat eps : {Rat(1), Rat(-1)}) {
    Word cand{chi_real_letter(theta, Sgn::Plus, eps * t)};
    if (operator_eq(eval_word(m, conj), eval_word(m, cand), 2)) matched = true;
  }
  CHECK(matched);
}

TEST_CASE("descending strings overflow the truncation conservatively") {
  auto m = TruncatedModule::build(HYP, iv({1, 0}), 3);
  // chi_{-alpha_2}(1) from the weight (1,0) runs a string of length 4
  auto op = chi_simple(m, 1, Sgn::Minus, Rat(1));
  CHECK(op.row_ok(KVec{0, 0}));
  CHECK(!op.row_ok(KVec{1, 0}));
  try {
    op.row(KVec{1, 0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationOverflow);
  }
  CHECK(op.valid_source_depth(3) >= 0);
}

TEST_CASE("torus injectivity on the fundamental collection") {
  auto w1 = TruncatedModule::build(A2, iv({1, 0}), 3);
  auto w2 = TruncatedModule::build(A2, iv({0, 1}), 3);
  ModuleCollection C({w1, w2});
  Word w{torus_letter(0, Rat(3, 2)), torus_letter(1, Rat(1))};
  auto ops = eval_word(C, w);
  bool identity = true;
  for (size_t mi = 0; mi < ops.size(); ++mi) {
    auto row = ops[mi].row(KVec{0, 0});
    if (row.size() != 1 || !row.begin()->second.is_identity()) identity = false;
  }
  CHECK(!identity);
}

TEST_CASE("zero torus parameter is rejected") {
  try {
    torus_letter(0, Rat(0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroTorusParameter);
  }
}
