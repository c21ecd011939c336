#include "gerbe/lie.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "gerbe/errors.hpp"

namespace gerbe {

namespace {

using cd = std::complex<double>;

std::vector<Eigen::MatrixXcd> gell_mann(int n) {
  std::vector<Eigen::MatrixXcd> out;
  const cd mi(0.0, -1.0);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(n, n);
      sym(j, k) = sym(k, j) = 1.0;
      Eigen::MatrixXcd asym = Eigen::MatrixXcd::Zero(n, n);
      asym(j, k) = cd(0.0, -1.0);
      asym(k, j) = cd(0.0, 1.0);
      out.push_back(mi * s * sym);
      out.push_back(mi * s * asym);
    }
  }
  for (int l = 1; l < n; ++l) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int k = 0; k < l; ++k) d(k, k) = c;
    d(l, l) = -l * c;
    out.push_back(mi * s * d);
  }
  return out;
}

}  // namespace

double inner(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) { return -(X * Y).trace().real(); }

LieAlgebra::LieAlgebra(int n) : n_(n) {
  if (n < 1) throw ArgumentError("su(n) needs n >= 1");
  basis_ = gell_mann(n);
  const int d = dim();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double expect = a == b ? 1.0 : 0.0;
      ortho_residual_ = std::max(ortho_residual_, std::abs(-(basis_[a] * basis_[b]).trace() - expect));
    }
  if (n >= 2) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    h(0, 0) = cd(0.0, 1.0);
    h(1, 1) = cd(0.0, -1.0);
    coroot_norm_ = inner(h, h);
    if (std::abs(coroot_norm_ - 2.0) > 1e-12) throw ConsistencyError("coroot length is not sqrt 2");
  }
  if (ortho_residual_ > 1e-12) throw ConsistencyError("su(n) basis is not orthonormal");
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Eigen::MatrixXcd comm = basis_[a] * basis_[b] - basis_[b] * basis_[a];
      for (int c = 0; c < d; ++c) {
        const double f = inner(comm, basis_[c]);
        if (std::abs(f) < 1e-14) continue;
        structure_.push_back({a, b, c, f});
        structure_.push_back({b, a, c, -f});
      }
    }
}

Eigen::MatrixXcd LieAlgebra::matrix(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_, n_);
  for (int a = 0; a < dim(); ++a) out += coeffs(a) * basis_[a];
  return out;
}

Eigen::VectorXd LieAlgebra::coefficients(const Eigen::MatrixXcd& X, double tol) const {
  const double skew = (X + X.adjoint()).cwiseAbs().maxCoeff();
  const double tr = std::abs(X.trace());
  if (skew > tol || tr > tol) {
    std::ostringstream os;
    os << "matrix is not in su(" << n_ << "): anti-Hermitian defect " << skew << ", trace " << tr;
    throw ValidationError(os.str());
  }
  Eigen::VectorXd c(dim());
  for (int a = 0; a < dim(); ++a) {
    const cd v = -(X * basis_[a]).trace();
    if (std::abs(v.imag()) > tol) throw ConsistencyError("imaginary residue in su(n) coefficient");
    c(a) = v.real();
  }
  return c;
}

void LieAlgebra::bracket(const double* x, const double* y, double* out) const {
  for (int c = 0; c < dim(); ++c) out[c] = 0.0;
  for (const auto& f : structure_) out[f.c] += f.value * x[f.a] * y[f.b];
}

namespace {

constexpr int kMaxRepDim = 200;

void check_partition(int n, const std::vector<int>& partition) {
  if (n < 2) throw ArgumentError("dynkin_index needs n >= 2");
  if (static_cast<int>(partition.size()) > n) throw CapabilityError("partition has more than n rows");
  for (std::size_t k = 0; k < partition.size(); ++k) {
    if (partition[k] <= 0) throw CapabilityError("partition parts must be positive");
    if (k > 0 && partition[k] > partition[k - 1]) throw CapabilityError("partition must be nonincreasing");
  }
}

// Visits the weight (content vector) of every semistandard tableau.
int for_each_tableau(int n, const std::vector<int>& shape, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < static_cast<int>(shape.size()); ++r)
    for (int c = 0; c < shape[r]; ++c) cells.emplace_back(r, c);
  std::vector<std::vector<int>> tab(shape.size());
  for (std::size_t r = 0; r < shape.size(); ++r) tab[r].assign(shape[r], 0);
  std::vector<int> weight(n, 0);
  int count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == cells.size()) {
      if (++count > kMaxRepDim) {
        throw CapabilityError("representation dimension exceeds " + std::to_string(kMaxRepDim));
      }
      visit(weight);
      return;
    }
    auto [r, c] = cells[k];
    int lo = 1;
    if (c > 0) lo = std::max(lo, tab[r][c - 1]);
    if (r > 0) lo = std::max(lo, tab[r - 1][c] + 1);
    for (int v = lo; v <= n; ++v) {
      tab[r][c] = v;
      ++weight[v - 1];
      rec(k + 1);
      --weight[v - 1];
    }
  };
  rec(0);
  return count;
}

}  // namespace

int representation_dimension(int n, const std::vector<int>& partition) {
  check_partition(n, partition);
  return for_each_tableau(n, partition, [](const std::vector<int>&) {});
}

Rational dynkin_index(int n, const std::vector<int>& partition) {
  check_partition(n, partition);
  std::int64_t first = 0, second = 0;
  for_each_tableau(n, partition, [&](const std::vector<int>& w) {
    const std::int64_t a = w[0] - w[1];
    first += a * a;
    if (n >= 3) {
      const std::int64_t b = w[0] - w[2];
      second += b * b;
    }
  });
  // both coroots have ⟨h, h⟩ = 2
  if (n >= 3 && first != second) throw ConsistencyError("Dynkin index depends on the coroot");
  return Rational(first, 2);
}

Representation::Representation(std::string name, std::shared_ptr<const LieAlgebra> source,
                               std::vector<Eigen::MatrixXcd> images, std::vector<int> partition)
    : name_(std::move(name)),
      source_(std::move(source)),
      images_(std::move(images)),
      partition_(std::move(partition)) {
  const int dimv = static_cast<int>(images_.front().rows());
  target_ = std::make_shared<const LieAlgebra>(dimv);
  push_ = Eigen::MatrixXd::Zero(target_->dim(), source_->dim());
  for (int a = 0; a < source_->dim(); ++a) {
    if (target_->dim() > 0) push_.col(a) = target_->coefficients(images_[a]);
    const double rebuild = (target_->matrix(push_.col(a)) - images_[a]).cwiseAbs().maxCoeff();
    if (rebuild > 1e-10) throw ConsistencyError("representation image outside su(dim V)");
  }
  // ρ̇ must preserve brackets
  const int d = source_->dim();
  std::vector<Eigen::MatrixXcd> expect(d * d, Eigen::MatrixXcd::Zero(dimv, dimv));
  for (const auto& f : source_->structure()) expect[f.a * d + f.b] += f.value * images_[f.c];
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Eigen::MatrixXcd lhs = images_[a] * images_[b] - images_[b] * images_[a] - expect[a * d + b];
      if (lhs.cwiseAbs().maxCoeff() > 1e-10) throw ConsistencyError("representation " + name_ + " is not a homomorphism");
    }
}

Representation Representation::trivial(int n) {
  auto src = std::make_shared<const LieAlgebra>(n);
  std::vector<Eigen::MatrixXcd> images(src->dim(), Eigen::MatrixXcd::Zero(1, 1));
  return Representation("trivial", src, std::move(images), {});
}

Representation Representation::fundamental(int n) {
  auto src = std::make_shared<const LieAlgebra>(n);
  return Representation("fundamental", src, src->basis(), {1});
}

Representation Representation::adjoint(int n) {
  auto src = std::make_shared<const LieAlgebra>(n);
  const int d = src->dim();
  std::vector<Eigen::MatrixXcd> images(d, Eigen::MatrixXcd::Zero(d, d));
  // (ad T_a)_{cb} = f_abc in the orthonormal real basis
  for (const auto& f : src->structure()) images[f.a](f.c, f.b) += f.value;
  std::vector<int> partition(n - 1, 1);
  partition[0] = 2;
  return Representation("adjoint", src, std::move(images), partition);
}

Representation Representation::spin(int two_j) {
  if (two_j < 1) throw ArgumentError("spin representation needs 2j >= 1");
  auto src = std::make_shared<const LieAlgebra>(2);
  const int d = two_j + 1;
  const double j = two_j / 2.0;
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = j - k;
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  Eigen::MatrixXcd jx = 0.5 * (jp + jp.adjoint());
  Eigen::MatrixXcd jy = cd(0.0, -0.5) * (jp - jp.adjoint());
  // T_a = -i σ_a/√2 = -i√2 (σ_a/2) maps to -i√2 J_a
  const cd s(0.0, -std::sqrt(2.0));
  return Representation("spin-" + std::to_string(two_j), src, {s * jx, s * jy, s * jz}, {two_j});
}

Representation Representation::named(const std::string& name, int n) {
  if (name == "trivial") return trivial(n);
  if (name == "fundamental") return fundamental(n);
  if (name == "adjoint") return adjoint(n);
  if (name.rfind("spin-", 0) == 0) {
    if (n != 2) throw CapabilityError("spin representations are defined for su(2) only");
    return spin(std::stoi(name.substr(5)));
  }
  throw CapabilityError("unsupported representation '" + name + "'");
}

}  // namespace gerbe
