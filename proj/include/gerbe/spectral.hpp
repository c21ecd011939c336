#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gerbe/rational.hpp"

namespace gerbe {

/// Holonomy of a flat rank-n bundle around the circle. Eigenphases are
/// computed once at construction and stored as fractions of a full turn in
/// [0, 1), ascending; color c (1-based) refers to the c-th of them.
class Holonomy {
 public:
  /// Throws ValidationError naming the violated bound when U is not unitary
  /// (or not special unitary when `special` is set).
  static Holonomy make(Eigen::MatrixXcd U, bool special = false, double tolerance = 1e-10);

  /// Diagonal holonomy diag(exp(2πi f_k)).
  static Holonomy diagonal(std::span<const double> turns, bool special = false,
                           double tolerance = 1e-10);

  int rank() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  bool special() const { return special_; }
  double tolerance() const { return tolerance_; }
  const std::vector<double>& phases() const { return phases_; }

 private:
  Holonomy() = default;

  Eigen::MatrixXcd matrix_;
  bool special_ = false;
  double tolerance_ = 0.0;
  std::vector<double> phases_;
};

struct EigenMode {
  int color = 1;
  int mode = 0;
  double eigenvalue = 0.0;

  friend bool operator==(const EigenMode&, const EigenMode&) = default;
};

/// Canonical order: eigenvalue ascending, ties by (color, mode).
bool canonical_less(const EigenMode& a, const EigenMode& b);

class Spectrum {
 public:
  Spectrum(Holonomy holonomy, int window, std::vector<EigenMode> modes)
      : holonomy_(std::move(holonomy)), window_(window), modes_(std::move(modes)) {}

  const Holonomy& holonomy() const { return holonomy_; }
  int window() const { return window_; }
  const std::vector<EigenMode>& modes() const { return modes_; }

  /// Same holonomy matrix and window.
  bool same_as(const Spectrum& other) const;

 private:
  Holonomy holonomy_;
  int window_;
  std::vector<EigenMode> modes_;
};

struct SpectralCut {
  Rational lambda;
  double gap_tolerance = 1e-9;
};

Spectrum dirac_spectrum(const Holonomy& h, int window);

/// True iff no eigenvalue lies within gap_tolerance of the cut.
/// Throws RangeError unless the cut lies strictly inside (-N, N).
bool in_cover(const Spectrum& s, const SpectralCut& cut);

/// Modes strictly between the cuts, in canonical order.
std::vector<EigenMode> band(const Spectrum& s, const SpectralCut& lo, const SpectralCut& hi);

/// Net number of eigenvalues crossing the cut upward along a closed path,
/// from below-cut counts on continuously tracked eigenphases.
int spectral_flow(std::span<const Holonomy> path, const SpectralCut& cut, int window);

/// Eigenvalues of the Fourier-truncated twisted derivative -i d/dθ with
/// blocks m·I - i log(U)/2π, principal branch of the logarithm.
std::vector<double> fourier_truncated_eigenvalues(const Holonomy& h, int window);

}  // namespace gerbe
