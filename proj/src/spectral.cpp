#include "gerbe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "gerbe/errors.hpp"

namespace gerbe {

namespace {

constexpr double kPhaseCluster = 1e-12;

std::vector<double> eigen_turns(const Eigen::MatrixXcd& U) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(U, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw ValidationError("eigenvalue solver failed on holonomy");
  std::vector<double> turns;
  turns.reserve(U.rows());
  for (Eigen::Index k = 0; k < U.rows(); ++k) {
    double t = std::arg(solver.eigenvalues()[k]) / (2.0 * std::numbers::pi);
    if (t < 0.0) t += 1.0;
    if (t >= 1.0 - kPhaseCluster) t = 0.0;
    turns.push_back(t);
  }
  std::sort(turns.begin(), turns.end());
  for (std::size_t k = 1; k < turns.size(); ++k) {
    if (turns[k] - turns[k - 1] < kPhaseCluster) turns[k] = turns[k - 1];
  }
  return turns;
}

double circular_delta(double to, double from) {
  double d = to - from;
  d -= std::floor(d + 0.5);
  return d;
}

double frac(double x) { return x - std::floor(x); }

std::int64_t count_below(const std::vector<double>& unwrapped, const Rational& cut, int window) {
  double lam = to_double(cut);
  std::int64_t total = 0;
  for (double phi : unwrapped) {
    total += static_cast<std::int64_t>(std::ceil(lam - phi)) + window;
  }
  return total;
}

}  // namespace

Holonomy Holonomy::make(Eigen::MatrixXcd U, bool special, double tolerance) {
  if (U.rows() == 0 || U.rows() != U.cols()) throw ValidationError("holonomy must be a nonempty square matrix");
  if (tolerance < 0.0) throw ValidationError("holonomy tolerance must be nonnegative");
  const auto n = U.rows();
  double unitarity = (U.adjoint() * U - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unitarity > tolerance) {
    std::ostringstream os;
    os << "holonomy not unitary: max|U^dag U - I| = " << unitarity << " > " << tolerance;
    throw ValidationError(os.str());
  }
  if (special) {
    double det_dev = std::abs(U.determinant() - 1.0);
    if (det_dev > tolerance) {
      std::ostringstream os;
      os << "holonomy not special: |det U - 1| = " << det_dev << " > " << tolerance;
      throw ValidationError(os.str());
    }
  }
  Holonomy h;
  h.phases_ = eigen_turns(U);
  h.matrix_ = std::move(U);
  h.special_ = special;
  h.tolerance_ = tolerance;
  return h;
}

Holonomy Holonomy::diagonal(std::span<const double> turns, bool special, double tolerance) {
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(turns.size(), turns.size());
  for (std::size_t k = 0; k < turns.size(); ++k) {
    U(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * turns[k]);
  }
  return make(std::move(U), special, tolerance);
}

bool canonical_less(const EigenMode& a, const EigenMode& b) {
  if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
  if (a.color != b.color) return a.color < b.color;
  return a.mode < b.mode;
}

bool Spectrum::same_as(const Spectrum& other) const {
  return window_ == other.window_ && holonomy_.matrix().rows() == other.holonomy_.matrix().rows() &&
         holonomy_.matrix() == other.holonomy_.matrix();
}

Spectrum dirac_spectrum(const Holonomy& h, int window) {
  if (window < 1) throw ArgumentError("window size must be at least 1");
  std::vector<EigenMode> modes;
  modes.reserve(static_cast<std::size_t>(2 * window + 1) * h.rank());
  const auto& phases = h.phases();
  for (int c = 1; c <= h.rank(); ++c) {
    for (int m = -window; m <= window; ++m) {
      modes.push_back({c, m, m + phases[c - 1]});
    }
  }
  std::sort(modes.begin(), modes.end(), canonical_less);
  return Spectrum(h, window, std::move(modes));
}

bool in_cover(const Spectrum& s, const SpectralCut& cut) {
  if (cut.gap_tolerance <= 0.0) throw ArgumentError("gap tolerance must be positive");
  if (!(cut.lambda > Rational(-s.window()) && cut.lambda < Rational(s.window()))) {
    throw RangeError("cut " + to_string(cut.lambda) + " outside window (-" + std::to_string(s.window()) +
                     ", " + std::to_string(s.window()) + ")");
  }
  double lam = to_double(cut.lambda);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& m : s.modes()) gap = std::min(gap, std::abs(m.eigenvalue - lam));
  return gap > cut.gap_tolerance;
}

std::vector<EigenMode> band(const Spectrum& s, const SpectralCut& lo, const SpectralCut& hi) {
  if (!(lo.lambda < hi.lambda)) {
    throw ArgumentError("band cuts out of order: " + to_string(lo.lambda) + " >= " + to_string(hi.lambda));
  }
  for (const auto* cut : {&lo, &hi}) {
    if (!in_cover(s, *cut)) throw CoverError("cut " + to_string(cut->lambda) + " lies on the spectrum");
  }
  double a = to_double(lo.lambda);
  double b = to_double(hi.lambda);
  std::vector<EigenMode> out;
  for (const auto& m : s.modes()) {
    if (m.eigenvalue > a && m.eigenvalue < b) out.push_back(m);
  }
  return out;
}

int spectral_flow(std::span<const Holonomy> path, const SpectralCut& cut, int window) {
  if (path.size() < 2) throw ArgumentError("spectral flow path needs at least two samples");
  if (window < 1) throw ArgumentError("window size must be at least 1");
  if (!(cut.lambda > Rational(-window) && cut.lambda < Rational(window))) {
    throw RangeError("cut " + to_string(cut.lambda) + " outside window");
  }
  const int n = path.front().rank();
  for (const auto& h : path) {
    if (h.rank() != n) throw ArgumentError("spectral flow path mixes holonomy ranks");
  }
  double close_tol = std::max({path.front().tolerance(), path.back().tolerance(), 1e-12});
  if ((path.front().matrix() - path.back().matrix()).cwiseAbs().maxCoeff() > close_tol) {
    throw ArgumentError("spectral flow path is not closed (first != last holonomy)");
  }

  std::vector<double> unwrapped = path.front().phases();
  const auto start = count_below(unwrapped, cut.lambda, window);
  std::vector<std::size_t> order(n);
  std::vector<double> best_delta(n), delta(n);
  for (std::size_t step = 1; step < path.size(); ++step) {
    const auto& next = path[step].phases();
    for (int k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return frac(unwrapped[a]) < frac(unwrapped[b]); });
    double best_cost = std::numeric_limits<double>::infinity();
    for (int shift = 0; shift < n; ++shift) {
      double cost = 0.0;
      for (int k = 0; k < n; ++k) {
        delta[k] = circular_delta(next[(k + shift) % n], frac(unwrapped[order[k]]));
        cost = std::max(cost, std::abs(delta[k]));
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_delta = delta;
      }
    }
    if (best_cost >= 0.25) {
      std::ostringstream os;
      os << "spectral flow step " << step << " moves an eigenvalue by " << best_cost
         << " (>= 1/4); refine the path";
      throw ResolutionError(os.str());
    }
    for (int k = 0; k < n; ++k) unwrapped[order[k]] += best_delta[k];
  }
  const auto end = count_below(unwrapped, cut.lambda, window);
  return static_cast<int>(start - end);
}

std::vector<double> fourier_truncated_eigenvalues(const Holonomy& h, int window) {
  const int n = h.rank();
  Eigen::MatrixXcd log_u = h.matrix().log();
  Eigen::MatrixXcd block = std::complex<double>(0.0, -1.0 / (2.0 * std::numbers::pi)) * log_u;
  block = 0.5 * (block + block.adjoint()).eval();
  const int dim = (2 * window + 1) * n;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = -window; m <= window; ++m) {
    const int off = (m + window) * n;
    op.block(off, off, n, n) = block + static_cast<double>(m) * Eigen::MatrixXcd::Identity(n, n);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

}  // namespace gerbe
