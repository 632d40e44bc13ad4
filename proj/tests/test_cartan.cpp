#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "kmchev/cartan.hpp"
#include "kmchev/errors.hpp"
#include <doctest.h>
#include <random>

using namespace kmchev;

namespace {

std::vector<IVec> mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<IVec> m;
  for (auto& r : rows) {
    IVec row;
    for (long x : r) row.emplace_back(x);
    m.push_back(std::move(row));
  }
  return m;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

} // namespace

TEST_CASE("validate accepts the GCM axioms") {
  CHECK(Gcm::validate(mat({{2}})).rank() == 1);
  CHECK(Gcm::validate(mat({{2, -1}, {-1, 2}})).rank() == 2);
  CHECK(code_of([] { Gcm::validate(mat({{2, -1}, {0, 2}})); }) ==
        ErrorCode::ZeroSymmetryViolated);
  CHECK(code_of([] { Gcm::validate(mat({{1}})); }) == ErrorCode::DiagonalNotTwo);
  CHECK(code_of([] { Gcm::validate(mat({{2, 1}, {1, 2}})); }) ==
        ErrorCode::PositiveOffDiagonal);
}

TEST_CASE("symmetrizer normalization") {
  auto a2 = Gcm::validate(mat({{2, -1}, {-1, 2}}));
  CHECK(symmetrize(a2) == QVec{1, 1});

  auto b2 = Gcm::validate(mat({{2, -1}, {-2, 2}}));
  CHECK(symmetrize(b2) == QVec{2, 1});

  auto aff = Gcm::validate(mat({{2, -2}, {-2, 2}}));
  CHECK(symmetrize(aff) == QVec{1, 1});
}

TEST_CASE("classification of the rank-2 family") {
  auto fin = classify(Gcm::validate(mat({{2, -1}, {-1, 2}})));
  CHECK(fin.type == CartanType::Finite);
  auto aff = classify(Gcm::validate(mat({{2, -2}, {-2, 2}})));
  CHECK(aff.type == CartanType::Affine);
  auto hyp = classify(Gcm::validate(mat({{2, -3}, {-3, 2}})));
  CHECK(hyp.type == CartanType::Indefinite);
  CHECK(hyp.hyperbolic);
}

TEST_CASE("decomposable matrices are rejected") {
  auto dec = Gcm::validate(mat({{2, 0}, {0, 2}}));
  CHECK(!dec.indecomposable());
  CHECK(code_of([&] { classify(dec); }) == ErrorCode::Decomposable);
}

TEST_CASE("y_diagram shapes") {
  auto e8 = y_diagram(2, 3, 5);
  CHECK(e8.rank() == 8);
  CHECK(classify(e8).type == CartanType::Finite);

  auto e10 = y_diagram(2, 3, 7);
  CHECK(e10.rank() == 10);
  auto c10 = classify(e10);
  CHECK(c10.type == CartanType::Indefinite);
  CHECK(c10.hyperbolic);

  auto d4 = y_diagram(2, 2, 2);
  CHECK(d4.rank() == 4);
  // star: three nodes attached to the center, no other edges
  int center_edges = 0, other_edges = 0;
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i + 1; j < 4; ++j)
      if (d4.a(i, j) != 0) (i == 0 ? center_edges : other_edges)++;
  CHECK(center_edges == 3);
  CHECK(other_edges == 0);

  CHECK(code_of([] { y_diagram(1, 3, 5); }) == ErrorCode::ArmTooShort);
}

TEST_CASE("determinants and the Y(p,q,r) formula") {
  CHECK(determinant(Gcm::validate(mat({{2}}))) == 2);

  auto r535 = determinant_report(y_diagram(2, 3, 5));
  CHECK(r535.has_formula);
  CHECK(r535.formula == -1);
  CHECK(r535.det == 1);
  CHECK(r535.equal_abs);
  CHECK(!r535.equal);

  auto r536 = determinant_report(y_diagram(2, 3, 6));
  CHECK(r536.formula == 0);
  CHECK(r536.det == 0);
  CHECK(r536.equal);
  CHECK(classify(y_diagram(2, 3, 6)).type == CartanType::Affine);
}

TEST_CASE("determinant sweep matches |pqr - pq - qr - rp|") {
  for (long p = 2; p <= 8; ++p)
    for (long q = p; q <= 8; ++q)
      for (long r = q; r <= 8; ++r) {
        auto rep = determinant_report(y_diagram(p, q, r));
        CHECK(rep.equal_abs);
      }
}

TEST_CASE("lattice index") {
  CHECK(*lattice_index(Gcm::validate(mat({{2, -1}, {-1, 2}}))) == 3);
  CHECK(*lattice_index(Gcm::validate(mat({{2}}))) == 2);
  CHECK(!lattice_index(Gcm::validate(mat({{2, -2}, {-2, 2}}))));
}

TEST_CASE("classification is stable under simultaneous permutation") {
  auto base = y_diagram(2, 3, 4); // E7
  std::vector<size_t> perm(base.rank());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<IVec> m(base.rank(), IVec(base.rank()));
    for (size_t i = 0; i < base.rank(); ++i)
      for (size_t j = 0; j < base.rank(); ++j) m[i][j] = base.a(perm[i], perm[j]);
    auto c = classify(Gcm::validate(m));
    CHECK(c.type == CartanType::Finite);
  }
}

namespace {

// brute-force hyperbolicity straight from the definition, over every proper
// subset
bool hyperbolic_brute(const Gcm& A) {
  size_t n = A.rank();
  for (size_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    if (idx.size() == n) continue;
    // split into components by scanning
    std::vector<char> seen(idx.size(), 0);
    for (size_t s = 0; s < idx.size(); ++s) {
      if (seen[s]) continue;
      std::vector<size_t> comp{s};
      seen[s] = 1;
      for (size_t c = 0; c < comp.size(); ++c)
        for (size_t jj = 0; jj < idx.size(); ++jj)
          if (!seen[jj] && A.a(idx[comp[c]], idx[jj]) != 0) {
            seen[jj] = 1;
            comp.push_back(jj);
          }
      std::vector<IVec> sub(comp.size(), IVec(comp.size()));
      for (size_t x = 0; x < comp.size(); ++x)
        for (size_t y = 0; y < comp.size(); ++y) sub[x][y] = A.a(idx[comp[x]], idx[comp[y]]);
      auto cl = classify(Gcm::validate(sub));
      if (cl.type == CartanType::Indefinite) return false;
    }
  }
  return true;
}

} // namespace

TEST_CASE("delete-one-vertex hyperbolicity agrees with the brute-force definition") {
  std::vector<std::vector<IVec>> cases = {
      mat({{2, -3}, {-3, 2}}),
      mat({{2, -2, 0}, {-2, 2, -1}, {0, -1, 2}}),
      mat({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}),
      mat({{2, -2, -2}, {-2, 2, -2}, {-2, -2, 2}}),
  };
  for (auto& m : cases) {
    Gcm A = Gcm::validate(m);
    auto c = classify(A);
    if (c.type == CartanType::Indefinite) CHECK(c.hyperbolic == hyperbolic_brute(A));
  }
  auto e10 = classify(y_diagram(2, 3, 7));
  CHECK(e10.hyperbolic == hyperbolic_brute(y_diagram(2, 3, 7)));
}
