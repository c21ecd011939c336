#include "gerbe/caloron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "gerbe/errors.hpp"

namespace gerbe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::pair<int, int>> pairs_of(int d) {
  if (d == 2) return {{0, 1}};
  return {{0, 1}, {0, 2}, {1, 2}};
}

using Block = Eigen::Ref<const Eigen::MatrixXd>;

// ∂_axis of a dim × points block.
Eigen::MatrixXd fd4_block(const Block& f, const Grid& g, int axis) {
  const int N = g.points();
  const int s = g.stride(axis);
  const double inv = 1.0 / (12.0 * g.h());
  Eigen::MatrixXd out(f.rows(), N);
  for (int x = 0; x < N; ++x) {
    const int i = (x / s) % g.M;
    auto at = [&](int k) { return x + (((i + k) % g.M + g.M) % g.M - i) * s; };
    out.col(x) = (-f.col(at(2)) + 8.0 * f.col(at(1)) - 8.0 * f.col(at(-1)) + f.col(at(-2))) * inv;
  }
  return out;
}

Eigen::MatrixXd bracket_block(const LieAlgebra& alg, const Block& x, const Block& y) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  if (x.rows() == 0) return out;
  for (Eigen::Index k = 0; k < x.cols(); ++k) alg.bracket(x.col(k).data(), y.col(k).data(), out.col(k).data());
  return out;
}

Eigen::RowVectorXd dots(const Block& x, const Block& y) { return x.cwiseProduct(y).colwise().sum(); }

Field theta_derivative(const Field& f, const Grid& g) {
  const Eigen::MatrixXd D = theta_derivative_matrix(g.P);
  const int N = g.points();
  Field out = Field::Zero(f.rows(), f.cols());
  for (int t = 0; t < g.P; ++t)
    for (int s = 0; s < g.P; ++s) {
      if (D(t, s) == 0.0) continue;
      out.middleCols(t * N, N) += D(t, s) * f.middleCols(s * N, N);
    }
  return out;
}

// Fields of one θ slice with the curvature components on that slice.
struct Slice {
  std::vector<Eigen::MatrixXd> f_theta;  // F_{θa}
  std::vector<Eigen::MatrixXd> f_base;   // F_{ab}, pairs_of order
};

struct FieldView {
  const Grid& g;
  const LieAlgebra& alg;
  const Field& phi;
  std::vector<const Field*> a;
};

Slice slice_curvature(const FieldView& v, const std::vector<Field>& dtheta_a, int t, bool need_theta) {
  const int N = v.g.points();
  const int d = v.g.d;
  Slice s;
  auto phi = v.phi.middleCols(t * N, N);
  std::vector<Eigen::MatrixXd> a(d);
  for (int k = 0; k < d; ++k) a[k] = v.a[k]->middleCols(t * N, N);
  // da[b][a] = ∂_a A_b
  std::vector<std::vector<Eigen::MatrixXd>> da(d, std::vector<Eigen::MatrixXd>(d));
  for (int b = 0; b < d; ++b)
    for (int ax = 0; ax < d; ++ax) da[b][ax] = fd4_block(a[b], v.g, ax);
  if (need_theta) {
    for (int ax = 0; ax < d; ++ax) {
      s.f_theta.push_back(dtheta_a[ax].middleCols(t * N, N) - fd4_block(phi, v.g, ax) +
                          bracket_block(v.alg, phi, a[ax]));
    }
  }
  for (auto [p, q] : pairs_of(d)) s.f_base.push_back(da[q][p] - da[p][q] + bracket_block(v.alg, a[p], a[q]));
  return s;
}

std::vector<Field> theta_derivatives(const FieldView& v) {
  std::vector<Field> out;
  for (const Field* f : v.a) out.push_back(theta_derivative(*f, v.g));
  return out;
}

FieldView view_of(const LatticeConnection& c) {
  FieldView v{c.grid(), c.algebra(), c.theta(), {}};
  for (int k = 0; k < c.grid().d; ++k) v.a.push_back(&c.base(k));
  return v;
}

FieldView view_of(const LoopHiggsPair& p) {
  FieldView v{p.grid(), p.algebra(), p.phi(), {}};
  for (int k = 0; k < p.grid().d; ++k) v.a.push_back(&p.a(k));
  return v;
}

GridForm b_field_of(const FieldView& v) {
  const int N = v.g.points();
  const auto pairs = pairs_of(v.g.d);
  auto dtheta = theta_derivatives(v);
  GridForm B(2, v.g.d, v.g.M);
  std::vector<Eigen::RowVectorXd> acc(pairs.size(), Eigen::RowVectorXd::Zero(N));
  for (int t = 0; t < v.g.P; ++t) {
    Slice s = slice_curvature(v, dtheta, t, false);
    auto phi = v.phi.middleCols(t * N, N);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [p, q] = pairs[k];
      auto ap = v.a[p]->middleCols(t * N, N);
      auto aq = v.a[q]->middleCols(t * N, N);
      acc[k] += 0.5 * (dots(ap, dtheta[q].middleCols(t * N, N)) - dots(aq, dtheta[p].middleCols(t * N, N))) -
                dots(s.f_base[k], phi);
    }
  }
  const double scale = -1.0 / (4.0 * kPi * kPi * v.g.P);
  for (std::size_t k = 0; k < pairs.size(); ++k) B.component(k) = scale * acc[k].transpose();
  return B;
}

void require_3d(const Grid& g, const char* what) {
  if (g.d != 3) throw DimensionError(std::string(what) + " needs a 3-dimensional base, got d = " + std::to_string(g.d));
}

}  // namespace

// ---------------------------------------------------------------------------

Grid::Grid(int P_, int M_, int d_) : P(P_), M(M_), d(d_) {
  if (P < 8 || P % 2 != 0) throw ArgumentError("theta grid needs an even P >= 8");
  if (M < 5) throw ArgumentError("base grid needs M >= 5 for the fourth-order stencil");
  if (d != 2 && d != 3) throw DimensionError("base torus dimension must be 2 or 3");
}

int Grid::points() const { return d == 2 ? M * M : M * M * M; }

int Grid::stride(int axis) const {
  int s = 1;
  for (int k = 0; k < axis; ++k) s *= M;
  return s;
}

std::array<double, 3> Grid::position(int index) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) {
    x[a] = (index % M) * h();
    index /= M;
  }
  return x;
}

LatticeConnection::LatticeConnection(Grid grid, std::shared_ptr<const LieAlgebra> algebra)
    : grid_(grid), algebra_(std::move(algebra)) {
  const int cols = grid_.P * grid_.points();
  theta_ = Field::Zero(algebra_->dim(), cols);
  base_.assign(grid_.d, Field::Zero(algebra_->dim(), cols));
}

LatticeConnection LatticeConnection::sample(Grid grid, std::shared_ptr<const LieAlgebra> algebra, const Sampler& f) {
  LatticeConnection c(grid, std::move(algebra));
  const int N = grid.points();
  Eigen::MatrixXd out(c.algebra().dim(), grid.d + 1);
  for (int t = 0; t < grid.P; ++t) {
    const double theta = t * grid.dtheta();
    for (int x = 0; x < N; ++x) {
      out.setZero();
      f(theta, grid.position(x), out);
      const int col = t * N + x;
      c.theta_.col(col) = out.col(0);
      for (int a = 0; a < grid.d; ++a) c.base_[a].col(col) = out.col(a + 1);
    }
  }
  return c;
}

bool operator==(const LatticeConnection& a, const LatticeConnection& b) {
  return a.grid_ == b.grid_ && a.algebra_->n() == b.algebra_->n() && a.theta_ == b.theta_ && a.base_ == b.base_;
}

LoopHiggsPair::LoopHiggsPair(Grid grid, std::shared_ptr<const LieAlgebra> algebra)
    : grid_(grid), algebra_(std::move(algebra)) {
  const int cols = grid_.P * grid_.points();
  phi_ = Field::Zero(algebra_->dim(), cols);
  a_.assign(grid_.d, Field::Zero(algebra_->dim(), cols));
}

bool operator==(const LoopHiggsPair& a, const LoopHiggsPair& b) {
  return a.grid_ == b.grid_ && a.algebra_->n() == b.algebra_->n() && a.phi_ == b.phi_ && a.a_ == b.a_;
}

LoopHiggsPair to_caloron(const LatticeConnection& c) {
  LoopHiggsPair p(c.grid(), c.algebra_ptr());
  p.phi() = c.theta();
  for (int a = 0; a < c.grid().d; ++a) p.a(a) = c.base(a);
  return p;
}

LatticeConnection from_caloron(const LoopHiggsPair& p) {
  LatticeConnection c(p.grid(), p.algebra_ptr());
  c.theta() = p.phi();
  for (int a = 0; a < p.grid().d; ++a) c.base(a) = p.a(a);
  return c;
}

// ---------------------------------------------------------------------------

GridForm::GridForm(int degree, int d, int M) : degree_(degree), d_(d), M_(M) {
  if (degree < 0 || degree > d) throw DimensionError("form degree outside [0, d]");
  const int N = d == 2 ? M * M : M * M * M;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<int> idx;
    for (int a = 0; a < d; ++a)
      if (mask & (1u << a)) idx.push_back(a);
    if (static_cast<int>(idx.size()) == degree) indices_.push_back(idx);
  }
  std::sort(indices_.begin(), indices_.end());
  comps_.assign(indices_.size(), Eigen::VectorXd::Zero(N));
}

Eigen::VectorXd& GridForm::at(const std::vector<int>& index) {
  for (std::size_t k = 0; k < indices_.size(); ++k)
    if (indices_[k] == index) return comps_[k];
  throw ArgumentError("multi-index is not an increasing index of this form");
}

const Eigen::VectorXd& GridForm::at(const std::vector<int>& index) const {
  return const_cast<GridForm*>(this)->at(index);
}

double GridForm::max_abs() const {
  double m = 0.0;
  for (const auto& c : comps_)
    if (c.size() > 0) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

std::vector<double> GridForm::integrals() const {
  const double vol = std::pow(1.0 / M_, d_);
  std::vector<double> out;
  for (const auto& c : comps_) out.push_back(c.sum() * vol);
  return out;
}

GridForm& GridForm::operator-=(const GridForm& o) {
  if (o.degree_ != degree_ || o.d_ != d_ || o.M_ != M_) throw ArgumentError("form shapes differ");
  for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] -= o.comps_[k];
  return *this;
}

GridForm& GridForm::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

Eigen::VectorXd fd4(const Eigen::VectorXd& f, const Grid& g, int axis) {
  Eigen::MatrixXd row = f.transpose();
  return fd4_block(row, g, axis).transpose();
}

GridForm exterior_derivative(const GridForm& w) {
  if (w.degree() >= w.d()) throw DimensionError("exterior derivative of a top-degree form");
  Grid g(8, w.M(), w.d());
  GridForm out(w.degree() + 1, w.d(), w.M());
  for (std::size_t k = 0; k < out.indices().size(); ++k) {
    const auto& I = out.indices()[k];
    for (std::size_t j = 0; j < I.size(); ++j) {
      std::vector<int> rest = I;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      const double sign = j % 2 == 0 ? 1.0 : -1.0;
      out.component(k) += sign * fd4(w.at(rest), g, I[j]);
    }
  }
  return out;
}

Curvature curvature(const LatticeConnection& c) {
  const auto v = view_of(c);
  const auto dtheta = theta_derivatives(v);
  const int N = c.grid().points();
  const int cols = c.grid().P * N;
  Curvature out;
  out.theta.assign(c.grid().d, Field(c.algebra().dim(), cols));
  out.base.assign(pairs_of(c.grid().d).size(), Field(c.algebra().dim(), cols));
  for (int t = 0; t < c.grid().P; ++t) {
    Slice s = slice_curvature(v, dtheta, t, true);
    for (std::size_t k = 0; k < s.f_theta.size(); ++k) out.theta[k].middleCols(t * N, N) = s.f_theta[k];
    for (std::size_t k = 0; k < s.f_base.size(); ++k) out.base[k].middleCols(t * N, N) = s.f_base[k];
  }
  return out;
}

GridForm b_field(const LoopHiggsPair& p) { return b_field_of(view_of(p)); }

GridForm three_curvature(const LoopHiggsPair& p) { return exterior_derivative(b_field(p)); }

GridForm pontryagin_form(const LatticeConnection& c) {
  require_3d(c.grid(), "pontryagin_form");
  const auto v = view_of(c);
  const auto dtheta = theta_derivatives(v);
  const int N = c.grid().points();
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(N);
  for (int t = 0; t < c.grid().P; ++t) {
    Slice s = slice_curvature(v, dtheta, t, true);
    acc += 2.0 * (dots(s.f_theta[0], s.f_base[2]) - dots(s.f_theta[1], s.f_base[1]) + dots(s.f_theta[2], s.f_base[0]));
  }
  GridForm out(3, 3, c.grid().M);
  out.component(0) = (-1.0 / (8.0 * kPi * kPi * c.grid().P)) * acc.transpose();
  return out;
}

GridForm index_curvature(const LatticeConnection& c, const Representation& rho) {
  require_3d(c.grid(), "index_curvature");
  if (rho.source().n() != c.algebra().n()) throw ArgumentError("representation and connection algebras differ");
  const auto v = view_of(c);
  const auto dtheta = theta_derivatives(v);
  const int N = c.grid().points();
  const int dv = rho.dim();
  const auto& images = rho.images();
  auto to_matrix = [&](const Eigen::MatrixXd& f, int x) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dv, dv);
    for (int a = 0; a < f.rows(); ++a) m += f(a, x) * images[a];
    return m;
  };
  std::vector<std::complex<double>> acc(N, 0.0);
  for (int t = 0; t < c.grid().P; ++t) {
    Slice s = slice_curvature(v, dtheta, t, true);
    for (int x = 0; x < N; ++x) {
      const auto t1 = to_matrix(s.f_theta[0], x), t2 = to_matrix(s.f_theta[1], x), t3 = to_matrix(s.f_theta[2], x);
      const auto b12 = to_matrix(s.f_base[0], x), b13 = to_matrix(s.f_base[1], x), b23 = to_matrix(s.f_base[2], x);
      acc[x] += 2.0 * (t1 * b23 - t2 * b13 + t3 * b12).trace();
    }
  }
  GridForm out(3, 3, c.grid().M);
  const double scale = 1.0 / (8.0 * kPi * kPi * c.grid().P);
  double imag = 0.0;
  for (int x = 0; x < N; ++x) {
    imag = std::max(imag, std::abs(acc[x].imag()) * scale);
    out.component(0)(x) = acc[x].real() * scale;
  }
  if (imag > 1e-10) throw ConsistencyError("imaginary residue in the representation curvature");
  return out;
}

LatticeConnection push_forward(const LatticeConnection& c, const Representation& rho) {
  if (rho.source().n() != c.algebra().n()) throw ArgumentError("representation and connection algebras differ");
  LatticeConnection out(c.grid(), rho.target_ptr());
  out.theta() = rho.pushforward() * c.theta();
  for (int a = 0; a < c.grid().d; ++a) out.base(a) = rho.pushforward() * c.base(a);
  return out;
}

LoopHiggsPair push_forward(const LoopHiggsPair& p, const Representation& rho) {
  return to_caloron(push_forward(from_caloron(p), rho));
}

Eigen::MatrixXd theta_derivative_matrix(int P) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(P, P);
  for (int j = 0; j < P; ++j)
    for (int k = 0; k < P; ++k) {
      if (j == k) continue;
      const int diff = j - k;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      D(j, k) = kPi * sign / std::tan(kPi * diff / P);
    }
  return D;
}

std::vector<Eigen::MatrixXcd> winding_gauge(int n, int P, int w) {
  if (n < 2) throw ArgumentError("winding gauge needs n >= 2");
  std::vector<Eigen::MatrixXcd> out;
  for (int k = 0; k < P; ++k) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(n, n);
    const double phase = kTwoPi * w * k / static_cast<double>(P);
    g(0, 0) = std::polar(1.0, phase);
    g(1, 1) = std::polar(1.0, -phase);
    out.push_back(g);
  }
  return out;
}

double higgs_gauge_law_check(const LoopHiggsPair& p, const std::vector<Eigen::MatrixXcd>& gamma) {
  const Grid& g = p.grid();
  const int n = p.algebra().n();
  if (static_cast<int>(gamma.size()) != g.P) throw ArgumentError("gauge loop must have P samples");
  for (const auto& m : gamma) {
    if (m.rows() != n || m.cols() != n) throw ArgumentError("gauge samples have the wrong size");
    const double dev = (m.adjoint() * m - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (dev > 1e-10) {
      std::ostringstream os;
      os << "gauge sample not unitary: max|g^dag g - I| = " << dev;
      throw ValidationError(os.str());
    }
  }
  const Eigen::MatrixXd D = theta_derivative_matrix(g.P);
  std::vector<Eigen::MatrixXcd> inv(g.P), maurer(g.P);
  for (int k = 0; k < g.P; ++k) {
    inv[k] = gamma[k].adjoint();
    Eigen::MatrixXcd dg = Eigen::MatrixXcd::Zero(n, n);
    for (int s = 0; s < g.P; ++s) dg += D(k, s) * gamma[s];
    maurer[k] = inv[k] * dg;
  }
  const int N = g.points();
  const double h = g.dtheta();
  double residual = 0.0;
  std::vector<Eigen::MatrixXcd> phi(g.P), rhs(g.P);
  for (int x = 0; x < N; ++x) {
    for (int k = 0; k < g.P; ++k) {
      phi[k] = p.algebra().matrix(p.phi().col(k * N + x));
      rhs[k] = inv[k] * phi[k] * gamma[k] + maurer[k];
    }
    for (int k = 0; k < g.P; ++k) {
      const int k1 = (k + 1) % g.P;
      Eigen::MatrixXcd link = (0.5 * h * (phi[k] + phi[k1])).exp();
      Eigen::MatrixXcd moved = inv[k] * link * gamma[k1];
      Eigen::MatrixXcd route_a = moved.log() / h;
      Eigen::MatrixXcd route_b = 0.5 * (rhs[k] + rhs[k1]);
      residual = std::max(residual, (route_a - route_b).cwiseAbs().maxCoeff());
    }
  }
  return residual;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"zero",       "theta-only", "abelian",   "flat",
                                                 "su2-simple", "su2-family", "su3-family"};
  return names;
}

LatticeConnection make_preset(const PresetSpec& spec) {
  const std::string& name = spec.name;
  int n = spec.n;
  if (name == "su2-simple" || name == "su2-family") n = 2;
  if (name == "su3-family") n = 3;
  if (n < 2) throw ArgumentError("presets need su(n) with n >= 2");
  auto alg = std::make_shared<const LieAlgebra>(n);
  const Grid& g = spec.grid;
  const double amp = spec.amplitude;
  const double c0 = spec.higgs;
  using Out = Eigen::Ref<Eigen::MatrixXd>;
  using X = std::array<double, 3>;
  auto s = [](double v) { return std::sin(kTwoPi * v); };
  auto c = [](double v) { return std::cos(kTwoPi * v); };
  const int d = g.d;

  if (name == "zero") return LatticeConnection(g, alg);
  if (name == "theta-only") {
    return LatticeConnection::sample(g, alg, [&](double, const X& x, Out o) { o(0, 0) = c0 * (s(x[0]) + c(x[1])); });
  }
  if (name == "abelian") {
    return LatticeConnection::sample(g, alg, [&](double, const X& x, Out o) { o(0, 2) = amp * s(x[0]); });
  }
  if (name == "flat") {
    // Ã = g⁻¹dg with g = exp(a sin2πx₁ T₁) exp(b sin2π(θ+x₂) T₂) exp(a cos2πx₃ T₃)
    const auto& T1 = alg->basis()[0];
    const auto& T2 = alg->basis()[1];
    const auto& T3 = alg->basis()[2];
    return LatticeConnection::sample(g, alg, [&, T1, T2, T3](double th, const X& x, Out o) {
      const double s2 = c0 * s(th + x[1]);
      const double ds2 = kTwoPi * c0 * c(th + x[1]);
      const double ds1 = kTwoPi * amp * c(x[0]);
      Eigen::MatrixXcd g2 = (s2 * T2).exp();
      Eigen::MatrixXcd g3 = Eigen::MatrixXcd::Identity(n, n);
      Eigen::MatrixXcd d3 = Eigen::MatrixXcd::Zero(n, n);
      if (d == 3) {
        g3 = (amp * c(x[2]) * T3).exp();
        d3 = -kTwoPi * amp * s(x[2]) * T3;
      }
      Eigen::MatrixXcd v1 = g3.adjoint() * g2.adjoint() * T1 * g2 * g3;
      Eigen::MatrixXcd v2 = g3.adjoint() * T2 * g3;
      o.col(0) = ds2 * alg->coefficients(v2);
      o.col(1) = ds1 * alg->coefficients(v1);
      o.col(2) = ds2 * alg->coefficients(v2);
      if (d == 3) o.col(3) = alg->coefficients(d3);
    });
  }
  if (name == "su2-simple") {
    return LatticeConnection::sample(g, alg, [&](double th, const X& x, Out o) {
      o(1, 0) = c0 * s(x[d - 1]);
      o(0, 1) = amp * s(th) * c(x[1]);
    });
  }
  if (name == "su2-family" || name == "su3-family") {
    const bool three = name == "su3-family";
    const int e1 = 0, e2 = 1, e3 = three ? 6 : 2;
    return LatticeConnection::sample(g, alg, [&, e1, e2, e3, three](double th, const X& x, Out o) {
      o(e1, 0) = c0 * s(x[0]);
      o(e2, 0) = c0 * c(th + x[1]);
      o(e3, 0) = c0 * s(x[2]);
      o(e1, 1) = amp * s(th + x[1]);
      o(e3, 1) = amp * c(x[2]);
      o(e2, 2) = amp * c(th - x[2]);
      o(e1, 2) = amp * s(x[0]);
      if (d == 3) {
        o(e3, 3) = amp * s(2.0 * th + x[0]);
        o(e2, 3) = amp * c(x[1]);
      }
      if (three) {
        o(7, 0) += 0.5 * c0 * c(x[1]);
        o(2, 1) += 0.5 * amp * s(th) * c(x[2]);
        if (d == 3) o(5, 3) += 0.5 * amp * c(th + x[0]);
      }
    });
  }
  throw ArgumentError("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------

bool MsIdentityResult::passed(double min_order) const {
  if (residual_fine <= 1e-12) return true;
  return std::isfinite(order) && order >= min_order;
}

double ms_residual(const LatticeConnection& c) {
  require_3d(c.grid(), "ms_identity_check");
  GridForm lhs = pontryagin_form(c);
  GridForm rhs = three_curvature(to_caloron(c));
  return (lhs - rhs).max_abs();
}

MsIdentityResult ms_identity_check(const PresetSpec& spec) {
  require_3d(spec.grid, "ms_identity_check");
  MsIdentityResult r;
  r.residual_coarse = ms_residual(make_preset(spec));
  PresetSpec fine = spec;
  fine.grid = Grid(spec.grid.P, 2 * spec.grid.M, spec.grid.d);
  const auto c = make_preset(fine);
  r.scale = pontryagin_form(c).max_abs();
  r.residual_fine = ms_residual(c);
  if (r.residual_coarse > 1e-13 && r.residual_fine > 0.0) {
    r.order = std::log2(r.residual_coarse / r.residual_fine);
  } else {
    r.order = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

double RhoScalingResult::relative() const {
  // a side that vanishes up to roundoff is measured absolutely
  constexpr double floor = 1e-10;
  const double b = b_scale > floor ? b_residual / b_scale : b_residual;
  const double h = h_scale > floor ? h_residual / h_scale : h_residual;
  return std::max(b, h);
}

RhoScalingResult rho_scaling_check(const LoopHiggsPair& p, const Representation& rho) {
  RhoScalingResult r;
  r.iota = rho.dynkin();
  const double iota = to_double(r.iota);
  GridForm b = b_field(p);
  GridForm b_rho = b_field(push_forward(p, rho));
  GridForm h = exterior_derivative(b);
  GridForm h_rho = exterior_derivative(b_rho);
  GridForm b_expect = iota * b;
  GridForm h_expect = iota * h;
  r.b_scale = b_expect.max_abs();
  r.h_scale = h_expect.max_abs();
  r.b_residual = (b_rho - b_expect).max_abs();
  r.h_residual = (h_rho - h_expect).max_abs();
  return r;
}

}  // namespace gerbe
