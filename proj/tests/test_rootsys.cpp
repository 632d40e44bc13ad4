#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "kmchev/errors.hpp"
#include "kmchev/rootsys.hpp"
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

RootCoords rc(std::initializer_list<long> c) {
  RootCoords r;
  for (long x : c) r.emplace_back(x);
  return r;
}

const Gcm A2 = gcm({{2, -1}, {-1, 2}});
const Gcm AFF = gcm({{2, -2}, {-2, 2}});
const Gcm HYP = gcm({{2, -3}, {-3, 2}});
const Gcm A1 = gcm({{2}});

} // namespace

TEST_CASE("simple reflections") {
  CHECK(reflect(A2, 0, rc({1, 0})) == rc({-1, 0}));
  CHECK(reflect(A2, 0, rc({0, 1})) == rc({1, 1}));
  CHECK(reflect(HYP, 0, rc({0, 1})) == rc({3, 1}));
}

TEST_CASE("reflection is an involution") {
  for (const Gcm* A : {&A2, &AFF, &HYP}) {
    for (const auto& r : real_roots_up_to_height(*A, 6))
      for (int i = 0; i < 2; ++i) CHECK(reflect(*A, i, reflect(*A, i, r.coords)) == r.coords);
  }
}

TEST_CASE("height") {
  CHECK(height(rc({1, 0})) == 1);
  CHECK(height(rc({1, 2})) == 3);
  CHECK(height(rc({-1, -1})) == -2);
}

TEST_CASE("real root enumeration") {
  auto a2 = real_roots_up_to_height(A2, 2);
  REQUIRE(a2.size() == 3);
  CHECK(a2[0].coords == rc({0, 1}));
  CHECK(a2[1].coords == rc({1, 0}));
  CHECK(a2[2].coords == rc({1, 1}));

  CHECK(real_roots_up_to_height(A1, 10).size() == 1);

  auto aff = real_roots_up_to_height(AFF, 3);
  REQUIRE(aff.size() == 4);
  CHECK(aff[2].coords == rc({1, 2}));
  CHECK(aff[3].coords == rc({2, 1}));

  // A2 has finitely many roots
  CHECK(real_roots_up_to_height(A2, 10).size() == 3);
}

TEST_CASE("witness words reproduce their roots") {
  for (const Gcm* A : {&A2, &AFF, &HYP}) {
    for (const auto& r : real_roots_up_to_height(*A, 6)) {
      RootCoords x = simple_root(A->rank(), r.witness.simple);
      for (auto it = r.witness.word.rbegin(); it != r.witness.word.rend(); ++it)
        x = reflect(*A, *it, x);
      CHECK(x == r.coords);
    }
  }
}

TEST_CASE("pruning margin does not lose roots at small heights") {
  // compare against enumeration run with a much larger bound, then filtered
  for (const Gcm* A : {&A2, &AFF, &HYP}) {
    for (long h = 1; h <= 5; ++h) {
      auto got = real_roots_up_to_height(*A, h);
      auto big = real_roots_up_to_height(*A, h + 8);
      std::vector<RootCoords> expect;
      for (const auto& r : big)
        if (height(r.coords) <= h) expect.push_back(r.coords);
      REQUIRE(got.size() == expect.size());
      for (size_t i = 0; i < got.size(); ++i) CHECK(got[i].coords == expect[i]);
    }
  }
}

TEST_CASE("root order is height-consistent with a left-to-right lex tie-break") {
  CHECK(root_order_cmp(rc({1, 0}), rc({1, 1})) < 0);
  CHECK(root_order_cmp(rc({1, 0}), rc({1, 0})) == 0);
  CHECK(root_order_cmp(rc({1, 0}), rc({0, 1})) > 0);
}

TEST_CASE("root order is total on enumerated sets") {
  auto roots = real_roots_up_to_height(HYP, 8);
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = 0; j < roots.size(); ++j) {
      int ij = root_order_cmp(roots[i].coords, roots[j].coords);
      int ji = root_order_cmp(roots[j].coords, roots[i].coords);
      CHECK(ij == -ji);
      if (i != j) CHECK(ij != 0);
    }
  // transitivity on the sorted list
  for (size_t i = 0; i + 1 < roots.size(); ++i)
    CHECK(root_order_cmp(roots[i].coords, roots[i + 1].coords) < 0);
}

TEST_CASE("module weight pairings") {
  // fundamental weights pair to delta_ij
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ModuleWeight mu{IVec{Int(i == 0), Int(i == 1)}, KVec{0, 0}};
      CHECK(pairing(A2, mu, j) == (i == j ? 1 : 0));
    }
  // lambda = 0, k = e_j gives -a_ij
  ModuleWeight mu0{IVec{Int(0), Int(0)}, KVec{0, 1}};
  CHECK(pairing(HYP, mu0, 0) == 3);
  ModuleWeight mu1{IVec{Int(1), Int(1)}, KVec{1, 0}};
  CHECK(pairing(A2, mu1, 0) == -1);
}

TEST_CASE("coroot pairings through witnesses") {
  auto roots = real_roots_up_to_height(A2, 2);
  // alpha_1 + alpha_2 has coroot alpha_1^vee + alpha_2^vee in A2
  const RealRoot& theta = roots[2];
  CHECK(coroot_coords(A2, theta.witness) == rc({1, 1}));
  ModuleWeight rho{IVec{Int(1), Int(1)}, KVec{0, 0}};
  CHECK(coroot_pairing(A2, rho, theta.witness) == 2);
}

TEST_CASE("integral h-lattices") {
  CHECK(integral_h_lattice(A1, LatticeTag::WeightLattice) == QMat::identity(1));
  auto rl = integral_h_lattice(A1, LatticeTag::RootLattice);
  CHECK(rl.at(0, 0) == Rat(1, 2));

  CHECK(integral_h_lattice(A2, LatticeTag::WeightLattice) == QMat::identity(2));

  try {
    integral_h_lattice(AFF, LatticeTag::RootLattice);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateCartan);
  }
}

TEST_CASE("weight-lattice dual sits inside the root-lattice dual") {
  for (const Gcm* A : {&A1, &A2, &HYP}) {
    QMat w = integral_h_lattice(*A, LatticeTag::WeightLattice);
    QMat r = integral_h_lattice(*A, LatticeTag::RootLattice);
    // every column of w must be an integer combination of columns of r
    QMat rinv = r.inverse();
    CHECK((rinv * w).is_integer());
  }
}
