#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gerbe/errors.hpp"
#include "gerbe/spectral.hpp"

using namespace gerbe;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cd(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  return qr.householderQ();
}

// Dense Fourier-truncated -i d/dθ with twisted boundary: block m·I + H with
// H = -i log U / 2π, log taken through the eigendecomposition of U (principal branch).
std::vector<double> dense_oracle(const Eigen::MatrixXcd& U, int N) {
  const int n = static_cast<int>(U.rows());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U);
  Eigen::MatrixXcd V = es.eigenvectors();
  Eigen::VectorXcd logs(n);
  for (int k = 0; k < n; ++k) logs(k) = std::log(es.eigenvalues()(k));
  Eigen::MatrixXcd H = V * (logs / cd(0.0, 2 * kPi)).asDiagonal() * V.inverse();
  H = 0.5 * (H + H.adjoint()).eval();
  const int dim = (2 * N + 1) * n;
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = -N; m <= N; ++m) {
    const int o = (m + N) * n;
    D.block(o, o, n, n) = H + static_cast<double>(m) * Eigen::MatrixXcd::Identity(n, n);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sa(D);
  std::vector<double> ev(sa.eigenvalues().data(), sa.eigenvalues().data() + dim);
  return ev;
}

std::vector<double> values(const Spectrum& s) {
  std::vector<double> v;
  for (const auto& m : s.modes()) v.push_back(m.eigenvalue);
  return v;
}

std::vector<double> interior(const std::vector<double>& v, int N) {
  std::vector<double> out;
  for (double x : v)
    if (x > -N + 1 && x < N - 1) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("trivial holonomy has integer spectrum") {
  auto h = Holonomy::make(Eigen::MatrixXcd::Identity(1, 1));
  auto s = dirac_spectrum(h, 2);
  REQUIRE(s.modes().size() == 5);
  CHECK(values(s) == std::vector<double>{-2, -1, 0, 1, 2});
}

TEST_CASE("phase pi shifts by one half") {
  Eigen::MatrixXcd U(1, 1);
  U(0, 0) = -1.0;
  auto v = values(dirac_spectrum(Holonomy::make(U), 1));
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(-0.5));
  CHECK(v[1] == doctest::Approx(0.5));
  CHECK(v[2] == doctest::Approx(1.5));
}

TEST_CASE("SU(2) phase 0.3 follows the [0,1) branch") {
  const double t[] = {0.3, -0.3};
  auto h = Holonomy::diagonal(t, true);
  CHECK(h.phases()[0] == doctest::Approx(0.3));
  CHECK(h.phases()[1] == doctest::Approx(0.7));
  auto s = dirac_spectrum(h, 1);
  REQUIRE(s.modes().size() == 6);
  for (const auto& m : s.modes()) {
    CHECK(m.eigenvalue == doctest::Approx(m.mode + h.phases()[m.color - 1]).epsilon(1e-14));
  }
}

TEST_CASE("interior eigenvalues agree with the dense oracle") {
  std::mt19937_64 rng(11);
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 4; ++trial) {
      Eigen::MatrixXcd U = random_unitary(n, rng);
      const int N = 4;
      auto lib = interior(values(dirac_spectrum(Holonomy::make(U), N)), N);
      auto ref = interior(dense_oracle(U, N), N);
      REQUIRE(lib.size() == ref.size());
      for (std::size_t k = 0; k < lib.size(); ++k) CHECK(std::abs(lib[k] - ref[k]) < 1e-10);
      auto ft = interior(fourier_truncated_eigenvalues(Holonomy::make(U), N), N);
      REQUIRE(ft.size() == ref.size());
      for (std::size_t k = 0; k < ft.size(); ++k) CHECK(std::abs(ft[k] - ref[k]) < 1e-10);
    }
  }
}

TEST_CASE("validation names the violated bound") {
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(2, 2) * 1.1;
  CHECK_THROWS_WITH_AS(Holonomy::make(U), doctest::Contains("not unitary"), ValidationError);
  Eigen::MatrixXcd W(1, 1);
  W(0, 0) = cd(0.0, 1.0);
  CHECK_THROWS_WITH_AS(Holonomy::make(W, true), doctest::Contains("not special"), ValidationError);
}

TEST_CASE("canonical order is total") {
  const double t[] = {0.0, 0.0};
  auto s = dirac_spectrum(Holonomy::diagonal(t), 1);
  for (std::size_t k = 1; k < s.modes().size(); ++k) CHECK(canonical_less(s.modes()[k - 1], s.modes()[k]));
  CHECK(s.modes()[0] == EigenMode{1, -1, -1.0});
  CHECK(s.modes()[1] == EigenMode{2, -1, -1.0});
}

TEST_CASE("cover membership") {
  auto triv = dirac_spectrum(Holonomy::make(Eigen::MatrixXcd::Identity(1, 1)), 3);
  CHECK(in_cover(triv, {Rational(1, 2)}));
  CHECK_FALSE(in_cover(triv, {Rational(1)}));
  CHECK_THROWS_AS(in_cover(triv, {Rational(3)}), RangeError);
  CHECK_THROWS_AS(in_cover(triv, {Rational(-7, 2)}), RangeError);

  const double t[] = {0.3, -0.3};
  auto su2 = dirac_spectrum(Holonomy::diagonal(t, true), 2);
  CHECK_FALSE(in_cover(su2, {Rational(3, 10)}));
  CHECK(in_cover(su2, {Rational(2, 5)}));
}

TEST_CASE("cover membership is monotone in the tolerance") {
  const double t[] = {0.3000001};
  auto s = dirac_spectrum(Holonomy::diagonal(t), 2);
  const Rational lam(3, 10);
  bool prev = false;
  for (double tol : {1e-3, 1e-5, 1e-7, 1e-9, 1e-11}) {
    bool now = in_cover(s, {lam, tol});
    if (prev) CHECK(now);
    prev = now;
  }
  CHECK(prev);
}

TEST_CASE("band extraction") {
  auto u1 = dirac_spectrum(Holonomy::make(Eigen::MatrixXcd::Identity(1, 1)), 3);
  auto b = band(u1, {Rational(-1, 2)}, {Rational(1, 2)});
  REQUIRE(b.size() == 1);
  CHECK(b[0].mode == 0);
  CHECK_THROWS_AS(band(u1, {Rational(1, 2)}, {Rational(1, 2)}), ArgumentError);
  CHECK_THROWS_AS(band(u1, {Rational(1, 2)}, {Rational(-1, 2)}), ArgumentError);
  CHECK_THROWS_AS(band(u1, {Rational(0)}, {Rational(1, 2)}), CoverError);

  auto u2 = dirac_spectrum(Holonomy::make(Eigen::MatrixXcd::Identity(2, 2)), 3);
  auto b2 = band(u2, {Rational(-1, 2)}, {Rational(3, 2)});
  std::vector<std::pair<int, int>> got;
  for (const auto& m : b2) got.emplace_back(m.color, m.mode);
  CHECK(got == std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {1, 1}, {2, 1}});
}

TEST_CASE("band additivity over a middle cut") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto s = dirac_spectrum(Holonomy::make(random_unitary(3, rng)), 4);
    const Rational cuts[] = {Rational(-5, 2), Rational(-3, 7), Rational(13, 11), Rational(7, 2)};
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int c = b + 1; c < 4; ++c) {
          SpectralCut l{cuts[a]}, m{cuts[b]}, h{cuts[c]};
          if (!in_cover(s, l) || !in_cover(s, m) || !in_cover(s, h)) continue;
          auto lhs = band(s, l, h);
          auto rhs = band(s, l, m);
          auto tail = band(s, m, h);
          rhs.insert(rhs.end(), tail.begin(), tail.end());
          std::sort(rhs.begin(), rhs.end(), canonical_less);
          CHECK(lhs == rhs);
        }
  }
}

namespace {

std::vector<Holonomy> u1_loop(int steps, int winding) {
  std::vector<Holonomy> path;
  for (int k = 0; k <= steps; ++k) {
    const double t[] = {winding * static_cast<double>(k) / steps};
    path.push_back(Holonomy::diagonal(t));
  }
  return path;
}

// Closed form for diag(e^{2πi w_c t}): unwrapped eigenvalue of color c at time t is m + w_c t.
int closed_form_flow(const std::vector<int>& windings, double lam, int N) {
  auto below = [&](double t) {
    int count = 0;
    for (int w : windings)
      for (int m = -N; m <= N; ++m) count += (m + w * t < lam) ? 1 : 0;
    return count;
  };
  return below(0.0) - below(1.0);
}

}  // namespace

TEST_CASE("spectral flow of winding families") {
  CHECK(spectral_flow(u1_loop(64, 1), {Rational(1, 2)}, 3) == 1);
  CHECK(closed_form_flow({1}, 0.5, 3) == 1);
  CHECK(spectral_flow(u1_loop(64, -1), {Rational(1, 2)}, 3) == -1);
  CHECK(spectral_flow(u1_loop(64, 2), {Rational(1, 2)}, 3) == 2);
  CHECK(closed_form_flow({2}, 0.5, 3) == 2);

  std::vector<Holonomy> su2;
  for (int k = 0; k <= 64; ++k) {
    const double t = k / 64.0;
    const double turns[] = {t, -t};
    su2.push_back(Holonomy::diagonal(turns, true));
  }
  CHECK(spectral_flow(su2, {Rational(1, 2)}, 3) == 0);
  CHECK(closed_form_flow({1, -1}, 0.5, 3) == 0);
}

TEST_CASE("spectral flow is zero on constant paths and additive") {
  const double t[] = {0.2, 0.5};
  std::vector<Holonomy> constant(5, Holonomy::diagonal(t));
  CHECK(spectral_flow(constant, {Rational(1, 3)}, 2) == 0);

  auto a = u1_loop(32, 1);
  auto twice = a;
  twice.insert(twice.end(), a.begin() + 1, a.end());
  CHECK(spectral_flow(twice, {Rational(1, 2)}, 3) == 2 * spectral_flow(a, {Rational(1, 2)}, 3));
}

TEST_CASE("spectral flow errors") {
  auto open = u1_loop(64, 1);
  open.pop_back();
  CHECK_THROWS_AS(spectral_flow(open, {Rational(1, 2)}, 3), ArgumentError);
  CHECK_THROWS_AS(spectral_flow(u1_loop(3, 1), {Rational(1, 2)}, 3), ResolutionError);
}
