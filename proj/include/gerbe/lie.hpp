#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gerbe/rational.hpp"

namespace gerbe {

/// su(n) in the generalized Gell-Mann basis T_a = -i λ_a / √2, orthonormal
/// for ⟨X, Y⟩ = -tr(XY). Fields are stored as real coefficient vectors.
/// n = 1 gives the zero algebra.
class LieAlgebra {
 public:
  struct Constant {
    int a, b, c;
    double value;
  };

  explicit LieAlgebra(int n);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Eigen::MatrixXcd>& basis() const { return basis_; }
  /// Nonzero f_abc = ⟨[T_a, T_b], T_c⟩.
  const std::vector<Constant>& structure() const { return structure_; }

  Eigen::MatrixXcd matrix(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const;
  /// Throws ValidationError if X is not anti-Hermitian traceless within tol.
  Eigen::VectorXd coefficients(const Eigen::MatrixXcd& X, double tol = 1e-10) const;
  void bracket(const double* x, const double* y, double* out) const;

  /// Basis residuals measured at construction.
  double orthonormality_residual() const { return ortho_residual_; }
  double coroot_norm() const { return coroot_norm_; }

 private:
  int n_;
  std::vector<Eigen::MatrixXcd> basis_;
  std::vector<Constant> structure_;
  double ortho_residual_ = 0.0;
  double coroot_norm_ = 0.0;
};

double inner(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y);

/// ι_ρ for the irreducible su(n) representation with Young diagram
/// `partition`, from the weights of its semistandard tableaux against the
/// coroot diag(1, -1, 0, ...). Cross-checked on a second coroot when n ≥ 3.
/// Throws CapabilityError above dimension 200.
Rational dynkin_index(int n, const std::vector<int>& partition);

/// Dimension of the representation (number of semistandard tableaux).
int representation_dimension(int n, const std::vector<int>& partition);

/// Lie-algebra representation ρ̇ of su(n) on V, with the pushforward of
/// coefficients into su(dim V).
class Representation {
 public:
  static Representation trivial(int n);
  static Representation fundamental(int n);
  static Representation adjoint(int n);
  /// su(2) spin-j representation, j a positive half-integer (given as 2j).
  static Representation spin(int two_j);
  /// By name: "trivial", "fundamental", "adjoint" or "spin-<2j>".
  static Representation named(const std::string& name, int n);

  const std::string& name() const { return name_; }
  const LieAlgebra& source() const { return *source_; }
  const LieAlgebra& target() const { return *target_; }
  std::shared_ptr<const LieAlgebra> target_ptr() const { return target_; }
  int dim() const { return target_->n(); }
  const std::vector<int>& partition() const { return partition_; }
  /// ρ̇(T_a) as matrices on V.
  const std::vector<Eigen::MatrixXcd>& images() const { return images_; }
  /// R with ρ̇(Σ x_a T_a) = Σ (R x)_b T'_b.
  const Eigen::MatrixXd& pushforward() const { return push_; }
  Rational dynkin() const { return dynkin_index(source_->n(), partition_); }

 private:
  Representation(std::string name, std::shared_ptr<const LieAlgebra> source, std::vector<Eigen::MatrixXcd> images,
                 std::vector<int> partition);

  std::string name_;
  std::shared_ptr<const LieAlgebra> source_;
  std::shared_ptr<const LieAlgebra> target_;
  std::vector<Eigen::MatrixXcd> images_;
  std::vector<int> partition_;
  Eigen::MatrixXd push_;
};

}  // namespace gerbe
