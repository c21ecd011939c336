#include "gerbe/detline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "gerbe/errors.hpp"

namespace gerbe {

namespace {

constexpr double kUnitTol = 1e-12;

bool same_set(std::vector<EigenMode> a, std::vector<EigenMode> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end(), canonical_less);
  std::sort(b.begin(), b.end(), canonical_less);
  return a == b;
}

}  // namespace

int sorting_sign(const std::vector<EigenMode>& modes) {
  std::vector<std::size_t> perm(modes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return canonical_less(modes[a], modes[b]); });
  // parity from the cycle decomposition
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    std::size_t len = 0;
    for (std::size_t k = start; !seen[k]; k = perm[k]) {
      seen[k] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

DetLine::DetLine(Spectrum spectrum, SpectralCut lo, SpectralCut hi, std::vector<EigenMode> basis,
                 std::complex<double> phase)
    : spectrum_(std::move(spectrum)), lo_(lo), hi_(hi), basis_(std::move(basis)), phase_(phase) {
  if (std::abs(std::abs(phase_) - 1.0) > kUnitTol) throw ValidationError("determinant-line phase is not unit");
  if (!same_set(basis_, gerbe::band(spectrum_, lo_, hi_))) {
    throw ValidationError("determinant-line basis differs from the band between " + to_string(lo_.lambda) +
                          " and " + to_string(hi_.lambda));
  }
}

std::complex<double> DetLine::canonical_phase() const {
  return phase_ * static_cast<double>(sorting_sign(basis_));
}

DetLine DetLine::with_phase(std::complex<double> phase) const {
  return DetLine(spectrum_, lo_, hi_, basis_, phase);
}

DetLine det_line(const Spectrum& s, const SpectralCut& lo, const SpectralCut& hi) {
  return DetLine(s, lo, hi, band(s, lo, hi), 1.0);
}

DetLine compose(const DetLine& a, const DetLine& b) {
  if (a.hi().lambda != b.lo().lambda) {
    throw CompositionError("cannot compose lines: upper cut " + to_string(a.hi().lambda) +
                           " != lower cut " + to_string(b.lo().lambda));
  }
  if (!a.spectrum().same_as(b.spectrum())) throw CompositionError("cannot compose lines over different spectra");
  std::vector<EigenMode> merged = a.basis();
  merged.insert(merged.end(), b.basis().begin(), b.basis().end());
  const int sign = sorting_sign(merged);
  std::sort(merged.begin(), merged.end(), canonical_less);
  return DetLine(a.spectrum(), a.lo(), b.hi(), std::move(merged), a.phase() * b.phase() * static_cast<double>(sign));
}

std::complex<double> delta_triviality(const CechTriple& t) {
  const auto& l = t.lo_mid.lo().lambda;
  const auto& m = t.lo_mid.hi().lambda;
  const auto& r = t.mid_hi.hi().lambda;
  if (!(l < m && m < r)) throw ArgumentError("Cech triple cuts must be strictly increasing");
  if (t.mid_hi.lo().lambda != m || t.lo_hi.lo().lambda != l || t.lo_hi.hi().lambda != r) {
    throw ArgumentError("Cech triple lines do not share cuts (" + to_string(l) + ", " + to_string(m) + ", " +
                        to_string(r) + ")");
  }
  if (!t.lo_mid.spectrum().same_as(t.mid_hi.spectrum()) || !t.lo_mid.spectrum().same_as(t.lo_hi.spectrum())) {
    throw ArgumentError("Cech triple lines live over different spectra");
  }
  DetLine composed = compose(t.lo_mid, t.mid_hi);
  return composed.canonical_phase() / t.lo_hi.canonical_phase();
}

double hodge_dual_iso(int dim, unsigned long long seed) {
  if (dim < 1) throw ArgumentError("dimension must be positive");
  if (dim > 10) throw ResourceError("exterior algebra of dimension 2^" + std::to_string(dim) + " exceeds the 2^10 limit");
  using cd = std::complex<double>;
  const std::uint32_t full = (1u << dim) - 1u;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) basis(r, c) += 0.5 * cd(gauss(rng), gauss(rng)) / std::sqrt(double(dim));

  // multivectors are dense arrays over bitmask-indexed standard basis e_T
  auto contract = [&](const std::vector<cd>& w, const Eigen::VectorXcd& b) {
    std::vector<cd> out(w.size(), 0.0);
    for (std::uint32_t T = 0; T <= full; ++T) {
      if (w[T] == 0.0) continue;
      int before = 0;
      for (int t = 0; t < dim; ++t) {
        if (!(T & (1u << t))) continue;
        const double sign = (before % 2 == 0) ? 1.0 : -1.0;
        out[T & ~(1u << t)] += sign * std::conj(b(t)) * w[T];
        ++before;
      }
    }
    return out;
  };

  double residual = 0.0;
  for (int p = 0; p <= dim; ++p) {
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t S = 0; S <= full; ++S)
      if (std::popcount(S) == p) subsets.push_back(S);
    const auto k = static_cast<Eigen::Index>(subsets.size());

    std::vector<std::uint32_t> out_subsets;
    for (std::uint32_t S = 0; S <= full; ++S)
      if (std::popcount(S) == dim - p) out_subsets.push_back(S);
    std::vector<int> out_index(full + 1, -1);
    for (std::size_t r = 0; r < out_subsets.size(); ++r) out_index[out_subsets[r]] = static_cast<int>(r);

    Eigen::MatrixXcd image(k, k);
    Eigen::MatrixXcd gram(k, k);
    for (Eigen::Index col = 0; col < k; ++col) {
      std::vector<cd> w(full + 1, 0.0);
      w[full] = 1.0;
      std::vector<int> members;
      for (int s = 0; s < dim; ++s)
        if (subsets[col] & (1u << s)) members.push_back(s);
      for (int s : members) w = contract(w, basis.col(s));
      for (std::uint32_t T = 0; T <= full; ++T) {
        if (out_index[T] >= 0) image(out_index[T], col) = w[T];
        else if (std::abs(w[T]) > 0.0) return std::numeric_limits<double>::infinity();
      }
      // Gram matrix of conj(b_S) in conj(Λ^p V): conj of det(B_S^† B_T)
      for (Eigen::Index row = 0; row < k; ++row) {
        std::vector<int> rmembers;
        for (int s = 0; s < dim; ++s)
          if (subsets[row] & (1u << s)) rmembers.push_back(s);
        Eigen::MatrixXcd g(p, p);
        for (int a = 0; a < p; ++a)
          for (int b = 0; b < p; ++b) g(a, b) = basis.col(rmembers[a]).dot(basis.col(members[b]));
        gram(row, col) = p == 0 ? cd(1.0) : std::conj(g.determinant());
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    if (eig.eigenvalues().minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
    Eigen::MatrixXcd inv_sqrt = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                eig.eigenvectors().adjoint();
    Eigen::MatrixXcd u = image * inv_sqrt;
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);
    residual = std::max(residual, (u.adjoint() * u - id).cwiseAbs().maxCoeff());
    residual = std::max(residual, (u * u.adjoint() - id).cwiseAbs().maxCoeff());
  }
  return residual;
}

}  // namespace gerbe
