#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gerbe/lie.hpp"
#include "gerbe/rational.hpp"

namespace gerbe {

/// Uniform periodic grids: θ ∈ [0,1) with P points, base torus [0,1)^d with
/// M points per axis. Base index = i_0 + M·i_1 + M²·i_2.
struct Grid {
  int P = 16;
  int M = 16;
  int d = 3;

  Grid() = default;
  Grid(int P, int M, int d);

  int points() const;
  double h() const { return 1.0 / M; }
  double dtheta() const { return 1.0 / P; }
  int stride(int axis) const;
  std::array<double, 3> position(int index) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Real su(n) coefficients, one column per sample; column t·points + x.
using Field = Eigen::MatrixXd;

/// Connection Ã = A_θ dθ + Σ A_a dx^a on S¹ × T^d in a global trivialization.
class LatticeConnection {
 public:
  using Sampler = std::function<void(double theta, const std::array<double, 3>& x, Eigen::Ref<Eigen::MatrixXd> out)>;

  LatticeConnection(Grid grid, std::shared_ptr<const LieAlgebra> algebra);

  /// `out` is dim × (d+1): column 0 is A_θ, column 1+a is A_a.
  static LatticeConnection sample(Grid grid, std::shared_ptr<const LieAlgebra> algebra, const Sampler& f);

  const Grid& grid() const { return grid_; }
  const LieAlgebra& algebra() const { return *algebra_; }
  std::shared_ptr<const LieAlgebra> algebra_ptr() const { return algebra_; }

  Field& theta() { return theta_; }
  const Field& theta() const { return theta_; }
  Field& base(int axis) { return base_.at(axis); }
  const Field& base(int axis) const { return base_.at(axis); }

  friend bool operator==(const LatticeConnection& a, const LatticeConnection& b);

 private:
  Grid grid_;
  std::shared_ptr<const LieAlgebra> algebra_;
  Field theta_;
  std::vector<Field> base_;
};

/// Caloron image (A, Φ): loop-algebra-valued fields on T^d, stored as θ samples.
class LoopHiggsPair {
 public:
  LoopHiggsPair(Grid grid, std::shared_ptr<const LieAlgebra> algebra);

  const Grid& grid() const { return grid_; }
  const LieAlgebra& algebra() const { return *algebra_; }
  std::shared_ptr<const LieAlgebra> algebra_ptr() const { return algebra_; }

  Field& phi() { return phi_; }
  const Field& phi() const { return phi_; }
  Field& a(int axis) { return a_.at(axis); }
  const Field& a(int axis) const { return a_.at(axis); }

  friend bool operator==(const LoopHiggsPair& a, const LoopHiggsPair& b);

 private:
  Grid grid_;
  std::shared_ptr<const LieAlgebra> algebra_;
  Field phi_;
  std::vector<Field> a_;
};

LoopHiggsPair to_caloron(const LatticeConnection& c);
LatticeConnection from_caloron(const LoopHiggsPair& p);

/// Real p-form on the base grid; one component per increasing multi-index.
class GridForm {
 public:
  GridForm(int degree, int d, int M);

  int degree() const { return degree_; }
  int d() const { return d_; }
  int M() const { return M_; }
  const std::vector<std::vector<int>>& indices() const { return indices_; }
  Eigen::VectorXd& component(std::size_t k) { return comps_.at(k); }
  const Eigen::VectorXd& component(std::size_t k) const { return comps_.at(k); }
  /// Component for an increasing multi-index.
  Eigen::VectorXd& at(const std::vector<int>& index);
  const Eigen::VectorXd& at(const std::vector<int>& index) const;

  double max_abs() const;
  /// Σ over the grid times h^d, for each component.
  std::vector<double> integrals() const;

  GridForm& operator-=(const GridForm& o);
  GridForm& operator*=(double s);
  friend GridForm operator-(GridForm a, const GridForm& b) { return a -= b; }
  friend GridForm operator*(double s, GridForm a) { return a *= s; }

 private:
  int degree_, d_, M_;
  std::vector<std::vector<int>> indices_;
  std::vector<Eigen::VectorXd> comps_;
};

/// Fourth-order central difference of periodic samples along one axis.
Eigen::VectorXd fd4(const Eigen::VectorXd& f, const Grid& g, int axis);

/// Exterior derivative with fourth-order central differences per axis.
GridForm exterior_derivative(const GridForm& w);

/// Components of F_Ã: theta[a] = F_{θa}, base[k] = F_{ab} for the k-th pair a < b
/// in the order (0,1), (0,2), (1,2).
struct Curvature {
  std::vector<Field> theta;
  std::vector<Field> base;
};
Curvature curvature(const LatticeConnection& c);

/// B = -(1/4π²) ∫ (½(⟨A_a, ∂_θA_b⟩ - ⟨A_b, ∂_θA_a⟩) - ⟨F_ab, Φ⟩) dθ.
GridForm b_field(const LoopHiggsPair& p);

/// H = dB.
GridForm three_curvature(const LoopHiggsPair& p);

/// -(1/8π²) ∫_{S¹} ⟨F_Ã ∧ F_Ã⟩; needs d = 3.
GridForm pontryagin_form(const LatticeConnection& c);

/// Representation curvature (1/8π²) ∫ tr_V(ρ̇F ∧ ρ̇F), evaluated on matrices.
GridForm index_curvature(const LatticeConnection& c, const Representation& rho);

/// Connection with coefficients pushed into su(dim V).
LatticeConnection push_forward(const LatticeConnection& c, const Representation& rho);
LoopHiggsPair push_forward(const LoopHiggsPair& p, const Representation& rho);

/// Spectral derivative matrix on the periodic θ grid.
Eigen::MatrixXd theta_derivative_matrix(int P);

/// Loop γ(θ) = exp(2π w θ diag(i, -i, 0, ...)) sampled on P points.
std::vector<Eigen::MatrixXcd> winding_gauge(int n, int P, int w);

/// Max difference between the gauge-transformed Higgs field obtained from
/// transformed θ-links and from ad(γ⁻¹)Φ + γ⁻¹∂_θγ, at link midpoints.
double higgs_gauge_law_check(const LoopHiggsPair& p, const std::vector<Eigen::MatrixXcd>& gamma);

struct PresetSpec {
  std::string name = "su2-family";
  int n = 2;
  Grid grid;
  double amplitude = 0.6;
  double higgs = 0.8;
};

/// Presets: zero, theta-only, abelian, flat, su2-simple, su2-family, su3-family.
LatticeConnection make_preset(const PresetSpec& spec);
const std::vector<std::string>& preset_names();

struct MsIdentityResult {
  double residual_coarse = 0.0;
  double residual_fine = 0.0;
  double order = 0.0;  // NaN when both residuals are at roundoff
  double scale = 0.0;  // max |Pontryagin side| on the fine grid
  bool passed(double min_order = 1.9) const;
};

/// Pointwise max |pontryagin_form - three_curvature|.
double ms_residual(const LatticeConnection& c);

/// Residuals at M and 2M and the measured order.
MsIdentityResult ms_identity_check(const PresetSpec& spec);

struct RhoScalingResult {
  Rational iota;
  double b_residual = 0.0;
  double h_residual = 0.0;
  double b_scale = 0.0;
  double h_scale = 0.0;
  /// Max of the B and H residuals, each relative to its scale unless the
  /// scale is below 1e-10, in which case it is absolute.
  double relative() const;
};

/// B_ρ - ι_ρ B and H_ρ - ι_ρ H on the grid.
RhoScalingResult rho_scaling_check(const LoopHiggsPair& p, const Representation& rho);

}  // namespace gerbe
