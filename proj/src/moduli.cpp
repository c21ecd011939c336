#include "gerbe/moduli.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "gerbe/errors.hpp"

namespace gerbe {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// keeps dyadic grid points off the degenerate quarter-turn conjugators
constexpr double kHandleOffset = 0.3;

void check_special_unitary(const Eigen::MatrixXcd& m, int n, double tol, const std::string& what) {
  if (m.rows() != n || m.cols() != n) throw ValidationError(what + " has the wrong size");
  const double unit = (m.adjoint() * m - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  const double det = std::abs(m.determinant() - 1.0);
  if (unit > tol || det > tol) {
    std::ostringstream os;
    os << what << " is not special unitary: max|M^dag M - I| = " << unit << ", |det M - 1| = " << det;
    throw ValidationError(os.str());
  }
}

Eigen::Matrix2cd sigma(int k) {
  Eigen::Matrix2cd s;
  if (k == 1) s << 0, 1, 1, 0;
  if (k == 2) s << 0, cd(0, -1), cd(0, 1), 0;
  if (k == 3) s << 1, 0, 0, -1;
  return s;
}

Eigen::MatrixXcd skew(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd s = 0.5 * (m - m.adjoint());
  const cd tr = s.trace() / static_cast<double>(m.rows());
  s -= tr * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return s;
}

}  // namespace

SurfaceGroupRep SurfaceGroupRep::make(int genus, int n, int z_power, std::vector<Eigen::MatrixXcd> generators,
                                      double tolerance) {
  if (genus < 2) throw ValidationError("surface genus must be at least 2");
  if (n < 2) throw ValidationError("SU(n) needs n >= 2");
  if (static_cast<int>(generators.size()) != 2 * genus) {
    throw ValidationError("expected " + std::to_string(2 * genus) + " generators, got " +
                          std::to_string(generators.size()));
  }
  for (std::size_t k = 0; k < generators.size(); ++k) {
    check_special_unitary(generators[k], n, tolerance, "generator " + std::to_string(k + 1));
  }
  SurfaceGroupRep r;
  r.genus_ = genus;
  r.n_ = n;
  r.z_power_ = ((z_power % n) + n) % n;
  r.tolerance_ = tolerance;
  r.generators_ = std::move(generators);
  return r;
}

std::complex<double> SurfaceGroupRep::z() const { return std::polar(1.0, kTwoPi * z_power_ / n_); }

bool SurfaceGroupRep::z_generates_center() const { return std::gcd(z_power_, n_) == 1; }

LoopWord LoopWord::relation(int genus) {
  LoopWord w;
  for (int i = 1; i <= genus; ++i) {
    const int a = 2 * i - 1, b = 2 * i;
    w.letters.insert(w.letters.end(), {{a, 1}, {b, 1}, {a, -1}, {b, -1}});
  }
  return w;
}

Eigen::MatrixXcd holonomy(const SurfaceGroupRep& r, const LoopWord& w) {
  if (w.letters.empty()) throw ArgumentError("holonomy needs a nonempty word");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(r.n(), r.n());
  for (auto [index, power] : w.letters) {
    if (index < 1 || index > 2 * r.genus()) {
      throw ArgumentError("generator index " + std::to_string(index) + " outside [1, " + std::to_string(2 * r.genus()) +
                          "]");
    }
    if (power != 1 && power != -1) throw ArgumentError("word exponents must be +1 or -1");
    const auto& g = r.generators()[index - 1];
    out = power == 1 ? Eigen::MatrixXcd(out * g) : Eigen::MatrixXcd(out * g.adjoint());
  }
  return out;
}

double relation_check(const SurfaceGroupRep& r) {
  Eigen::MatrixXcd prod = holonomy(r, LoopWord::relation(r.genus()));
  return (prod - r.z() * Eigen::MatrixXcd::Identity(r.n(), r.n())).cwiseAbs().maxCoeff();
}

IrreducibilityResult irreducibility_check(const SurfaceGroupRep& r) {
  const int n = r.n();
  const int n2 = n * n;
  const auto& gens = r.generators();
  Eigen::MatrixXcd stacked(static_cast<Eigen::Index>(gens.size()) * n2, n2);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    stacked.middleRows(static_cast<Eigen::Index>(k) * n2, n2) =
        Eigen::kroneckerProduct(id, gens[k]) - Eigen::kroneckerProduct(Eigen::MatrixXcd(gens[k].transpose()), id);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
  const auto& sv = svd.singularValues();
  IrreducibilityResult out;
  out.smallest_nonnull = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) < 1e-8) {
      ++out.commutant_dimension;
    } else {
      out.smallest_nonnull = std::min(out.smallest_nonnull, sv(k));
    }
    if (sv(k) >= 1e-9 && sv(k) <= 1e-7) out.indeterminate = true;
  }
  out.irreducible = out.commutant_dimension == 1;
  return out;
}

SurfaceGroupRep conjugate(const SurfaceGroupRep& r, const Eigen::MatrixXcd& h) {
  check_special_unitary(h, r.n(), r.tolerance(), "conjugating element");
  std::vector<Eigen::MatrixXcd> gens;
  for (const auto& g : r.generators()) gens.push_back(h * g * h.adjoint());
  return SurfaceGroupRep::make(r.genus(), r.n(), r.z_power(), std::move(gens), r.tolerance());
}

SurfaceGroupRep genus2_su2_example() {
  const cd i(0.0, 1.0);
  Eigen::MatrixXcd a1 = i * sigma(1), b1 = i * sigma(2);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  return SurfaceGroupRep::make(2, 2, 1, {a1, b1, id, id});
}

Eigen::MatrixXcd random_special_unitary(int n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = cd(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const cd det = q.determinant();
  q *= std::pow(det, -1.0 / n);
  return q;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXcd torus_generator() {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2, 2);
  t(0, 0) = cd(0.0, 1.0);
  t(1, 1) = cd(0.0, -1.0);
  return t;
}

Eigen::MatrixXcd conj_generator() { return cd(0.0, 1.0) * Eigen::MatrixXcd(sigma(1)); }

Eigen::MatrixXcd handle_conjugator(const ModuliFamily& f, double x2) {
  return ((kTwoPi * f.windings[1] * x2 + kHandleOffset) * cd(0.0, 1.0) * Eigen::MatrixXcd(sigma(2))).exp();
}

// Generators before the overall conjugation by exp(2π w₃ x₃ iσ₁).
std::vector<Eigen::MatrixXcd> base_generators(const ModuliFamily& f, const std::array<double, 3>& x) {
  const auto T = torus_generator();
  const cd i(0.0, 1.0);
  const Eigen::MatrixXcd k = handle_conjugator(f, x[1]);
  Eigen::MatrixXcd a2 = k * (kTwoPi * f.windings[0] * x[0] * T).exp() * k.adjoint();
  Eigen::MatrixXcd b2 = k * (0.5 * std::numbers::pi * T).exp() * k.adjoint();
  return {i * Eigen::MatrixXcd(sigma(1)), i * Eigen::MatrixXcd(sigma(2)), a2, b2};
}

// ∂/∂x_axis of one letter g^{±1}, axis 0 or 1.
Eigen::MatrixXcd letter_derivative(const ModuliFamily& f, const std::array<double, 3>& x, int index, int power,
                                   int axis) {
  if (index < 3) return Eigen::MatrixXcd::Zero(2, 2);
  const auto gens = base_generators(f, x);
  const Eigen::MatrixXcd g = power == 1 ? gens[index - 1] : Eigen::MatrixXcd(gens[index - 1].adjoint());
  if (axis == 1) {
    const Eigen::MatrixXcd K = kTwoPi * f.windings[1] * cd(0.0, 1.0) * Eigen::MatrixXcd(sigma(2));
    return K * g - g * K;
  }
  if (index == 4) return Eigen::MatrixXcd::Zero(2, 2);
  const Eigen::MatrixXcd k = handle_conjugator(f, x[1]);
  const Eigen::MatrixXcd dT = static_cast<double>(power) * kTwoPi * f.windings[0] * (k * torus_generator() * k.adjoint());
  return dT * g;
}

}  // namespace

SurfaceGroupRep ModuliFamily::at(const std::array<double, 3>& x) const {
  auto gens = base_generators(*this, x);
  Eigen::MatrixXcd h = (kTwoPi * windings[2] * x[2] * conj_generator()).exp();
  for (auto& g : gens) g = h * g * h.adjoint();
  return SurfaceGroupRep::make(2, 2, 1, std::move(gens));
}

Eigen::MatrixXcd ModuliFamily::holonomy_at(const LoopWord& w, const std::array<double, 3>& x) const {
  return holonomy(at(x), w);
}

Eigen::MatrixXcd ModuliFamily::holonomy_derivative(const LoopWord& w, const std::array<double, 3>& x,
                                                   int axis) const {
  if (axis < 0 || axis > 2) throw ArgumentError("family parameter axis must be 0, 1 or 2");
  Eigen::MatrixXcd hol = holonomy_at(w, x);
  if (axis == 2) {
    // hol = h W h⁻¹, so ∂₃hol = 2π w₃ [iσ₁, hol]
    Eigen::MatrixXcd k = kTwoPi * windings[2] * conj_generator();
    return k * hol - hol * k;
  }
  const Eigen::MatrixXcd h = (kTwoPi * windings[2] * x[2] * conj_generator()).exp();
  const auto gens = base_generators(*this, x);
  std::vector<Eigen::MatrixXcd> factors;
  for (auto [index, power] : w.letters)
    factors.push_back(power == 1 ? gens[index - 1] : Eigen::MatrixXcd(gens[index - 1].adjoint()));
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(2, 2);
  for (std::size_t k = 0; k < factors.size(); ++k) {
    auto [index, power] = w.letters[k];
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(2, 2);
    for (std::size_t j = 0; j < factors.size(); ++j)
      term = j == k ? Eigen::MatrixXcd(term * letter_derivative(*this, x, index, power, axis))
                    : Eigen::MatrixXcd(term * factors[j]);
    total += term;
  }
  return h * total * h.adjoint();
}

std::vector<Holonomy> ModuliFamily::holonomy_loop(const LoopWord& w, int axis, int steps) const {
  if (axis < 0 || axis > 2) throw ArgumentError("family parameter axis must be 0, 1 or 2");
  if (steps < 2) throw ArgumentError("holonomy loop needs at least two steps");
  std::vector<Holonomy> path;
  for (int k = 0; k <= steps; ++k) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    x[axis] = k == steps ? 0.0 : static_cast<double>(k) / steps;
    path.push_back(Holonomy::make(holonomy_at(w, x), true));
  }
  return path;
}

std::vector<Holonomy> u1_winding_loop(int winding, int steps) {
  if (steps < 2) throw ArgumentError("holonomy loop needs at least two steps");
  std::vector<Holonomy> path;
  for (int k = 0; k <= steps; ++k) {
    const double t = k == steps ? 0.0 : static_cast<double>(winding) * k / steps;
    const double turns[1] = {t - std::floor(t)};
    path.push_back(Holonomy::diagonal(turns, false));
  }
  return path;
}

LatticeConnection pairing_connection(const ModuliFamily& family, const LoopWord& gamma, const Grid& grid,
                                     double amplitude, bool theta_dependent) {
  if (grid.d != 3) throw DimensionError("the pairing needs a 3-parameter family");
  if (grid.M < 8 || grid.P < 8) throw ValidationError("family sampling too coarse: need M >= 8 and P >= 8");
  auto alg = std::make_shared<const LieAlgebra>(2);
  // θ-independent pieces, sampled once per base point
  const int N = grid.points();
  Eigen::MatrixXd phi(alg->dim(), N);
  std::vector<Eigen::MatrixXd> da(3, Eigen::MatrixXd(alg->dim(), N));
  for (int x = 0; x < N; ++x) {
    const auto p = grid.position(x);
    phi.col(x) = alg->coefficients(skew(family.holonomy_at(gamma, p)));
    for (int a = 0; a < 3; ++a) da[a].col(x) = alg->coefficients(skew(family.holonomy_derivative(gamma, p, a)));
  }
  LatticeConnection c(grid, alg);
  for (int t = 0; t < grid.P; ++t) {
    const double f = theta_dependent ? amplitude * std::sin(kTwoPi * t * grid.dtheta()) : amplitude;
    c.theta().middleCols(t * N, N) = phi;
    for (int a = 0; a < 3; ++a) c.base(a).middleCols(t * N, N) = f * da[a];
  }
  return c;
}

PairingResult pontryagin_pairing(const ModuliFamily& family, const LoopWord& gamma, const Representation& rho,
                                 const Grid& grid, double amplitude, bool theta_dependent) {
  if (rho.source().n() != 2) throw ArgumentError("the model family lives in SU(2)");
  auto c = pairing_connection(family, gamma, grid, amplitude, theta_dependent);
  GridForm density = pontryagin_form(push_forward(c, rho));
  PairingResult out{density.integrals()[0], density.max_abs(), density};
  return out;
}

}  // namespace gerbe
