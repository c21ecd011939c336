#pragma once

#include <complex>
#include <vector>

#include "gerbe/spectral.hpp"

namespace gerbe {

/// Determinant line of the band between two cuts, represented by an ordered
/// basis of eigenmodes and a unit phase: the element phase·(b_1 ∧ ... ∧ b_k).
class DetLine {
 public:
  /// `basis` must equal band(spectrum, lo, hi) as a set; any order is allowed.
  DetLine(Spectrum spectrum, SpectralCut lo, SpectralCut hi, std::vector<EigenMode> basis,
          std::complex<double> phase);

  const Spectrum& spectrum() const { return spectrum_; }
  const SpectralCut& lo() const { return lo_; }
  const SpectralCut& hi() const { return hi_; }
  const std::vector<EigenMode>& basis() const { return basis_; }
  std::complex<double> phase() const { return phase_; }

  /// Phase relative to the canonically ordered basis of the same band.
  std::complex<double> canonical_phase() const;

  DetLine with_phase(std::complex<double> phase) const;

 private:
  Spectrum spectrum_;
  SpectralCut lo_;
  SpectralCut hi_;
  std::vector<EigenMode> basis_;
  std::complex<double> phase_;
};

/// Sign of the permutation that sorts `modes` into canonical order.
int sorting_sign(const std::vector<EigenMode>& modes);

DetLine det_line(const Spectrum& s, const SpectralCut& lo, const SpectralCut& hi);

/// L_{λμ} ⊗ L_{μτ} → L_{λτ}: concatenate, sort canonically, multiply in the sign.
DetLine compose(const DetLine& a, const DetLine& b);

struct CechTriple {
  DetLine lo_mid;
  DetLine mid_hi;
  DetLine lo_hi;
};

/// Ratio of compose(lo_mid, mid_hi) to lo_hi in canonical sections.
std::complex<double> delta_triviality(const CechTriple& t);

/// Max deviation from unitarity/bijectivity of the contraction map
/// conj(Λ^p V) ⊗ det V → Λ^{d-p} V over all degrees, for a pseudorandom
/// non-orthonormal basis of V = C^dim.
double hodge_dual_iso(int dim, unsigned long long seed);

}  // namespace gerbe
