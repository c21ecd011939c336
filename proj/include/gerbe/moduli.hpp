#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gerbe/caloron.hpp"
#include "gerbe/spectral.hpp"

namespace gerbe {

/// Point of Hom_z(π₁Σ′, SU(n)): generators A₁, B₁, ..., A_g, B_g and the
/// central defect z = exp(2πik/n)·I. Construction validates special
/// unitarity only; relation_check reports how well the relation holds.
class SurfaceGroupRep {
 public:
  static SurfaceGroupRep make(int genus, int n, int z_power, std::vector<Eigen::MatrixXcd> generators,
                              double tolerance = 1e-10);

  int genus() const { return genus_; }
  int n() const { return n_; }
  int z_power() const { return z_power_; }
  std::complex<double> z() const;
  /// Metadata only: z generates the center when gcd(k, n) = 1.
  bool z_generates_center() const;
  double tolerance() const { return tolerance_; }
  const std::vector<Eigen::MatrixXcd>& generators() const { return generators_; }
  const Eigen::MatrixXcd& A(int i) const { return generators_.at(2 * (i - 1)); }
  const Eigen::MatrixXcd& B(int i) const { return generators_.at(2 * (i - 1) + 1); }

 private:
  SurfaceGroupRep() = default;

  int genus_ = 0;
  int n_ = 0;
  int z_power_ = 0;
  double tolerance_ = 0.0;
  std::vector<Eigen::MatrixXcd> generators_;
};

/// Letters (generator index, ±1); index 2i-1 is a_i and 2i is b_i.
struct LoopWord {
  std::vector<std::pair<int, int>> letters;

  static LoopWord relation(int genus);
  friend LoopWord operator*(LoopWord a, const LoopWord& b) {
    a.letters.insert(a.letters.end(), b.letters.begin(), b.letters.end());
    return a;
  }
};

/// ‖∏ᵢ[Aᵢ, Bᵢ] - z·I‖_max with [A, B] = ABA⁻¹B⁻¹.
double relation_check(const SurfaceGroupRep& r);

struct IrreducibilityResult {
  bool irreducible = false;
  int commutant_dimension = 0;
  bool indeterminate = false;
  /// Smallest singular value counted as nonzero, for diagnostics.
  double smallest_nonnull = 0.0;
};

/// Joint commutant of the generators from the SVD of the stacked
/// I⊗G - Gᵀ⊗I; singular values below 1e-8 are null, values in
/// [1e-9, 1e-7] make the verdict indeterminate.
IrreducibilityResult irreducibility_check(const SurfaceGroupRep& r);

/// φ ↦ Ad_h ∘ φ. Throws ValidationError unless h is special unitary.
SurfaceGroupRep conjugate(const SurfaceGroupRep& r, const Eigen::MatrixXcd& h);

/// Ordered product of generators and inverses along the word.
Eigen::MatrixXcd holonomy(const SurfaceGroupRep& r, const LoopWord& w);

/// Genus-2 SU(2) point A₁ = iσ₁, B₁ = iσ₂, A₂ = B₂ = I, z = -I.
SurfaceGroupRep genus2_su2_example();

/// Pseudorandom SU(n) matrix (Haar-like, from a seeded QR).
Eigen::MatrixXcd random_special_unitary(int n, unsigned long long seed);

/// Three-parameter family on T³ sharing A₁, B₁ with the genus-2 example:
/// A₂ = k exp(2π w₁ x₁ T) k⁻¹ and B₂ = k exp(πT/2) k⁻¹ with T = diag(i, -i),
/// k = exp((2π w₂ x₂ + 0.3) iσ₂), and the whole representation conjugated by
/// exp(2π w₃ x₃ iσ₁).
struct ModuliFamily {
  std::array<int, 3> windings{1, 1, 1};

  SurfaceGroupRep at(const std::array<double, 3>& x) const;
  Eigen::MatrixXcd holonomy_at(const LoopWord& w, const std::array<double, 3>& x) const;
  /// ∂/∂x_axis of the holonomy, by the product rule on analytic generator derivatives.
  Eigen::MatrixXcd holonomy_derivative(const LoopWord& w, const std::array<double, 3>& x, int axis) const;
  /// Circle holonomies t ↦ holonomy(r(x(t)), γ) along a loop in one parameter.
  std::vector<Holonomy> holonomy_loop(const LoopWord& w, int axis, int steps) const;
};

/// U(1) loop t ↦ exp(2πi·winding·t) sampled at steps+1 points, closed.
std::vector<Holonomy> u1_winding_loop(int winding, int steps);

struct PairingResult {
  double value = 0.0;         // ∫_{T³} H_{ρ,γ}
  double density_max = 0.0;   // max |H_{ρ,γ}| on the grid
  GridForm density;
};

/// Model pairing: the caloron connection Φ = skew(hol(x)),
/// A_a = amplitude·sin(2πθ)·skew(∂_a hol(x)) (θ-independent A when
/// `theta_dependent` is false), pushed through ρ, integrated over T³.
PairingResult pontryagin_pairing(const ModuliFamily& family, const LoopWord& gamma, const Representation& rho,
                                 const Grid& grid, double amplitude = 0.5, bool theta_dependent = true);

/// The caloron connection used by pontryagin_pairing, over su(2).
LatticeConnection pairing_connection(const ModuliFamily& family, const LoopWord& gamma, const Grid& grid,
                                     double amplitude, bool theta_dependent);

}  // namespace gerbe
