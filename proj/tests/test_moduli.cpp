#include "doctest.h"

#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "gerbe/errors.hpp"
#include "gerbe/moduli.hpp"

using namespace gerbe;
using cd = std::complex<double>;

namespace {

// Commutant dimension by dense null space of the commutation map, via a
// full-pivot LU rank rather than the SVD used by the library.
int commutant_oracle(const SurfaceGroupRep& r) {
  const int n = r.n();
  std::vector<Eigen::MatrixXcd> cols;
  Eigen::MatrixXcd sys(static_cast<Eigen::Index>(r.generators().size()) * n * n, n * n);
  for (int e = 0; e < n * n; ++e) {
    Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(n, n);
    E(e % n, e / n) = 1.0;
    for (std::size_t k = 0; k < r.generators().size(); ++k) {
      Eigen::MatrixXcd c = r.generators()[k] * E - E * r.generators()[k];
      sys.block(static_cast<Eigen::Index>(k) * n * n, e, n * n, 1) = Eigen::Map<Eigen::VectorXcd>(c.data(), n * n);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys);
  lu.setThreshold(1e-9);
  return n * n - static_cast<int>(lu.rank());
}

SurfaceGroupRep identity_rep(int genus, int n) {
  return SurfaceGroupRep::make(genus, n, 0, std::vector<Eigen::MatrixXcd>(2 * genus, Eigen::MatrixXcd::Identity(n, n)));
}

}  // namespace

TEST_CASE("relation check") {
  CHECK(relation_check(identity_rep(2, 2)) == 0.0);
  auto r = genus2_su2_example();
  CHECK(r.z() == cd(-1.0, 0.0) + cd(0.0, r.z().imag()));
  CHECK(std::abs(r.z() + 1.0) < 1e-15);
  CHECK(relation_check(r) <= 1e-12);
  CHECK(r.z_generates_center());

  auto gens = r.generators();
  Eigen::MatrixXcd X = cd(0.0, 1.0) * Eigen::MatrixXcd::Identity(2, 2);
  X(1, 1) = cd(0.0, -1.0);
  gens[0] = gens[0] * Eigen::MatrixXcd(1e-3 * X).exp();
  auto perturbed = SurfaceGroupRep::make(2, 2, 1, gens);
  const double res = relation_check(perturbed);
  CHECK(res > 1e-4);
  CHECK(res < 1e-2);
}

TEST_CASE("construction validates generators") {
  std::vector<Eigen::MatrixXcd> bad(4, Eigen::MatrixXcd::Identity(2, 2));
  bad[1] *= 2.0;
  CHECK_THROWS_AS(SurfaceGroupRep::make(2, 2, 0, bad), ValidationError);
  CHECK_THROWS_AS(SurfaceGroupRep::make(1, 2, 0, {bad[0], bad[0]}), ValidationError);
  CHECK_THROWS_AS(SurfaceGroupRep::make(2, 2, 0, {bad[0]}), ValidationError);
}

TEST_CASE("irreducibility") {
  auto triv = irreducibility_check(identity_rep(2, 3));
  CHECK_FALSE(triv.irreducible);
  CHECK(triv.commutant_dimension == 9);

  auto r = genus2_su2_example();
  auto res = irreducibility_check(r);
  CHECK(res.irreducible);
  CHECK(res.commutant_dimension == 1);
  CHECK_FALSE(res.indeterminate);
  CHECK(commutant_oracle(r) == 1);

  // SU(2) ⊕ SU(2) blocks inside SU(4)
  std::vector<Eigen::MatrixXcd> gens;
  for (const auto& g : r.generators()) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4, 4);
    b.topLeftCorner(2, 2) = g;
    b.bottomRightCorner(2, 2) = g;
    gens.push_back(b);
  }
  auto block = SurfaceGroupRep::make(2, 4, 0, gens);
  auto bres = irreducibility_check(block);
  CHECK_FALSE(bres.irreducible);
  CHECK(bres.commutant_dimension >= 2);
  CHECK(bres.commutant_dimension == commutant_oracle(block));
}

TEST_CASE("indeterminate band") {
  // a generator with off-diagonal part 1e-8 sits in the ambiguous band
  const double eps = 1e-8;
  Eigen::MatrixXcd g(2, 2);
  g << std::cos(eps), -std::sin(eps), std::sin(eps), std::cos(eps);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = cd(0.0, 1.0);
  d(1, 1) = cd(0.0, -1.0);
  auto r = SurfaceGroupRep::make(2, 2, 0, {d, g, Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2)});
  CHECK(irreducibility_check(r).indeterminate);
}

TEST_CASE("conjugation invariance") {
  auto r = genus2_su2_example();
  CHECK(conjugate(r, Eigen::MatrixXcd::Identity(2, 2)).generators() == r.generators());
  auto central = conjugate(r, -Eigen::MatrixXcd::Identity(2, 2));
  for (int k = 0; k < 4; ++k) CHECK((central.generators()[k] - r.generators()[k]).cwiseAbs().maxCoeff() < 1e-15);
  const double base = relation_check(r);
  for (unsigned long long seed = 1; seed <= 10; ++seed) {
    auto c = conjugate(r, random_special_unitary(2, seed));
    CHECK(std::abs(relation_check(c) - base) <= 1e-12);
    auto v = irreducibility_check(c);
    CHECK(v.irreducible);
    CHECK(v.commutant_dimension == 1);
  }
  CHECK_THROWS_AS(conjugate(r, 2.0 * Eigen::MatrixXcd::Identity(2, 2)), ValidationError);
}

TEST_CASE("holonomy along words") {
  auto r = conjugate(genus2_su2_example(), random_special_unitary(2, 4));
  CHECK((holonomy(r, {{{1, 1}, {1, -1}}}) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(holonomy(r, {{{1, 1}}}) == r.A(1));
  Eigen::MatrixXcd rel = holonomy(r, LoopWord::relation(2));
  CHECK((rel - r.z() * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == doctest::Approx(relation_check(r)));
  LoopWord w1{{{1, 1}, {3, -1}}}, w2{{{2, 1}, {4, 1}, {1, -1}}};
  CHECK((holonomy(r, w1 * w2) - holonomy(r, w1) * holonomy(r, w2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(holonomy(r, {{{5, 1}}}), ArgumentError);
  CHECK_THROWS_AS(holonomy(r, {{{1, 2}}}), ArgumentError);
  CHECK_THROWS_AS(holonomy(r, {}), ArgumentError);
}

TEST_CASE("family derivatives match finite differences") {
  ModuliFamily f{{1, 2, 1}};
  LoopWord w{{{3, 1}, {2, 1}, {4, -1}, {3, 1}}};
  const std::array<double, 3> x{0.13, 0.41, 0.77};
  for (int a = 0; a < 3; ++a) {
    const double h = 1e-5;
    auto xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    Eigen::MatrixXcd fd = (f.holonomy_at(w, xp) - f.holonomy_at(w, xm)) / (2 * h);
    CHECK((fd - f.holonomy_derivative(w, x, a)).cwiseAbs().maxCoeff() < 1e-6);
  }
  for (double t : {0.0, 0.3, 0.9}) CHECK(relation_check(f.at({t, 1 - t, t / 2})) < 1e-12);
}

TEST_CASE("spectral flow along family loops") {
  ModuliFamily f{{1, 1, 1}};
  // balanced diag(e^{2πix}, e^{-2πix}) loop: the colors cancel
  auto loop = f.holonomy_loop({{{3, 1}}}, 0, 64);
  CHECK(spectral_flow(loop, {Rational(1, 2)}, 3) == 0);
  auto twice = f.holonomy_loop({{{3, 1}, {3, 1}}}, 0, 64);
  CHECK(spectral_flow(twice, {Rational(1, 2)}, 3) == 0);
}

TEST_CASE("winding loops") {
  const SpectralCut cut{Rational(1, 3)};
  CHECK(spectral_flow(u1_winding_loop(1, 40), cut, 3) == 1);
  CHECK(spectral_flow(u1_winding_loop(-1, 40), cut, 3) == -1);
  CHECK(spectral_flow(u1_winding_loop(0, 40), cut, 3) == 0);
  // additivity: w = 1 then w = 2 concatenated gives 3
  auto a = u1_winding_loop(1, 40), b = u1_winding_loop(2, 80);
  std::vector<Holonomy> ab(a.begin(), a.end() - 1);
  ab.insert(ab.end(), b.begin(), b.end());
  CHECK(spectral_flow(ab, cut, 3) == 3);
  CHECK(spectral_flow(u1_winding_loop(3, 120), cut, 3) == 3);
  CHECK_THROWS_AS(u1_winding_loop(1, 1), ArgumentError);
}

TEST_CASE("pairing on model families") {
  const Grid g(8, 8, 3);
  ModuliFamily constant{{0, 0, 0}};
  LoopWord gamma{{{3, 1}, {4, 1}, {1, 1}}};
  auto zero = pontryagin_pairing(constant, gamma, Representation::fundamental(2), g);
  CHECK(zero.density_max < 1e-14);
  CHECK(std::abs(zero.value) < 1e-14);

  ModuliFamily f{{1, 1, 1}};
  auto fund = pontryagin_pairing(f, gamma, Representation::fundamental(2), g);
  auto adj = pontryagin_pairing(f, gamma, Representation::adjoint(2), g);
  CHECK(fund.density_max > 1e-3);
  CHECK((adj.density - 4.0 * fund.density).max_abs() <= 1e-6 * adj.density_max);
  CHECK(std::abs(adj.value - 4.0 * fund.value) <= 1e-6 * std::max(1.0, std::abs(adj.value)));
  // global trivialization: the density is exact, so its integral vanishes
  CHECK(std::abs(fund.value) < 1e-12);

  auto flat = pontryagin_pairing(f, gamma, Representation::fundamental(2), g, 0.5, false);
  CHECK(std::abs(flat.value) < 1e-12);
  CHECK_THROWS_AS(pontryagin_pairing(f, gamma, Representation::fundamental(2), Grid(8, 6, 3)), ValidationError);
  CHECK_THROWS_AS(pontryagin_pairing(f, gamma, Representation::fundamental(2), Grid(8, 8, 2)), DimensionError);
}

TEST_CASE("pairing under refinement") {
  ModuliFamily f{{1, 1, 1}};
  LoopWord gamma{{{3, 1}, {4, 1}, {1, 1}}};
  auto coarse = pontryagin_pairing(f, gamma, Representation::fundamental(2), Grid(8, 8, 3));
  auto fine = pontryagin_pairing(f, gamma, Representation::fundamental(2), Grid(8, 16, 3));
  CHECK(std::abs(coarse.value) < 1e-12);
  CHECK(std::abs(fine.value) < 1e-12);
  CHECK(fine.density_max > 1.0);
}
