#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "gerbe/rational.hpp"

namespace gerbe {

using cplx = std::complex<double>;

/// Modes m with |m| <= N for each of n_colors colors, polarized at a
/// non-integer reference cut λ. Excitation slots are ordered by mode
/// ascending, then color ascending.
class FockWindow {
 public:
  static constexpr int kMaxSlots = 256;

  FockWindow(int n_colors, int N, Rational lambda);

  int n_colors() const { return n_colors_; }
  int N() const { return N_; }
  const Rational& lambda() const { return lambda_; }
  int slot_count() const { return (2 * N_ + 1) * n_colors_; }

  bool contains_mode(int mode) const { return mode >= -N_ && mode <= N_; }
  int slot(int color, int mode) const { return (mode + N_) * n_colors_ + (color - 1); }
  int color_of(int slot) const { return slot % n_colors_ + 1; }
  int mode_of(int slot) const { return slot / n_colors_ - N_; }
  /// Slot above the reference cut: an excitation there is a particle.
  bool particle_slot(int slot) const { return Rational(mode_of(slot)) > lambda_; }

  friend bool operator==(const FockWindow& a, const FockWindow& b) {
    return a.n_colors_ == b.n_colors_ && a.N_ == b.N_ && a.lambda_ == b.lambda_;
  }

 private:
  int n_colors_;
  int N_;
  Rational lambda_;
};

/// Basis state given by its set of excitations relative to |λ⟩: particles
/// in slots above the cut, holes in slots below it.
class FockState {
 public:
  FockState() = default;

  static FockState from_slots(const std::vector<int>& slots);

  bool test(int slot) const { return (words_[slot >> 6] >> (slot & 63)) & 1u; }
  void flip(int slot) { words_[slot >> 6] ^= (std::uint64_t{1} << (slot & 63)); }
  int grade() const;
  /// Number of excitations in slots strictly before `slot`.
  int count_below(int slot) const;
  std::vector<int> slots() const;

  /// (color, mode) of the particles and holes.
  std::vector<std::pair<int, int>> particles(const FockWindow& w) const;
  std::vector<std::pair<int, int>> holes(const FockWindow& w) const;

  /// Every excitation lies in a slot with |mode| <= N - margin.
  bool within_margin(const FockWindow& w, int margin) const;

  friend bool operator==(const FockState&, const FockState&) = default;
  friend bool operator<(const FockState& a, const FockState& b) { return a.words_ < b.words_; }

 private:
  std::array<std::uint64_t, FockWindow::kMaxSlots / 64> words_{};
};

/// Graded-then-lexicographic order used for basis enumeration.
bool basis_less(const FockState& a, const FockState& b);

class FockVector {
 public:
  static constexpr double kZero = 1e-14;

  explicit FockVector(FockWindow w) : window_(std::move(w)) {}
  static FockVector vacuum(const FockWindow& w);
  static FockVector basis_state(const FockWindow& w, const FockState& s);

  const FockWindow& window() const { return window_; }
  const std::map<FockState, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const FockState& s, cplx amplitude);
  cplx amplitude(const FockState& s) const;

  FockVector& operator+=(const FockVector& other);
  FockVector& operator-=(const FockVector& other);
  FockVector& operator*=(cplx c);
  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator*(cplx c, FockVector a) { return a *= c; }

  double max_abs() const;
  double norm() const;
  /// Adds without discarding small amplitudes; for exact accumulation.
  void add_raw(const FockState& s, cplx amplitude) { terms_[s] += amplitude; }
  void prune();

 private:
  FockWindow window_;
  std::map<FockState, cplx> terms_;
};

/// ψ^i_m (kind Psi) or ψ̄^i_m (kind PsiBar), with {ψ^i_m, ψ̄^j_n} = δ_{m+n,0}δ^{ij}.
struct ModeOperator {
  enum class Kind { Psi, PsiBar };
  Kind kind = Kind::Psi;
  int color = 1;
  int mode = 0;

  static ModeOperator psi(int color, int mode) { return {Kind::Psi, color, mode}; }
  static ModeOperator psibar(int color, int mode) { return {Kind::PsiBar, color, mode}; }

  friend auto operator<=>(const ModeOperator&, const ModeOperator&) = default;
};

/// Action on a basis state: resulting state and sign, or nullopt for zero.
std::optional<std::pair<FockState, int>> apply_mode(const ModeOperator& op, const FockWindow& w,
                                                     const FockState& s);

/// Throws RangeError for an out-of-window mode.
FockVector apply_mode(const ModeOperator& op, const FockVector& v);

/// Enumerated basis of states with grade <= max_grade supported in
/// |mode| <= N - margin, in graded-then-lexicographic order.
class FockBasis {
 public:
  FockBasis(const FockWindow& w, int max_grade, int margin = 0);

  const FockWindow& window() const { return window_; }
  const std::vector<FockState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  std::optional<std::size_t> index_of(const FockState& s) const;

 private:
  FockWindow window_;
  std::vector<FockState> states_;
  std::map<FockState, std::size_t> index_;
};

/// Linear operator on the truncated Fock space, stored as a finite linear
/// combination of words in mode operators (a word applies right to left).
/// The empty word is the identity.
class SparseOperator {
 public:
  using Word = std::vector<ModeOperator>;

  explicit SparseOperator(FockWindow w, int safe_margin = 0) : window_(std::move(w)), safe_margin_(safe_margin) {}

  static SparseOperator identity(const FockWindow& w);
  static SparseOperator word(const FockWindow& w, Word ops, cplx coeff = 1.0);

  const FockWindow& window() const { return window_; }
  const std::map<Word, cplx>& words() const { return words_; }
  int safe_margin() const { return safe_margin_; }
  void set_safe_margin(int margin) { safe_margin_ = margin; }
  /// True when the state's support stays clear of the boundary margin.
  bool is_safe(const FockState& s) const { return s.within_margin(window_, safe_margin_); }

  void add_word(const Word& w, cplx coeff);

  SparseOperator& operator+=(const SparseOperator& o);
  SparseOperator& operator-=(const SparseOperator& o);
  SparseOperator& operator*=(cplx c);
  friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
  friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }
  friend SparseOperator operator*(cplx c, SparseOperator a) { return a *= c; }
  /// Operator product (b acts first).
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);

  FockVector apply(const FockVector& v) const;
  FockVector apply(const FockState& s) const;

  /// Sum of |coefficients|; bounds the operator norm since each word has norm <= 1.
  double coefficient_norm() const;

  /// Matrix over the domain basis; rows index `codomain`, and amplitudes
  /// landing outside it are dropped.
  Eigen::SparseMatrix<cplx> matrix(const FockBasis& domain, const FockBasis& codomain) const;

 private:
  FockWindow window_;
  int safe_margin_;
  std::map<Word, cplx> words_;
};

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b);

/// :ψ^i_m ψ̄^j_n:_cut is ψψ̄ when m > cut, −ψ̄ψ when m < cut.
SparseOperator normal_ordered_pair(int i, int j, int m, int n, const FockWindow& w, const Rational& cut);
inline SparseOperator normal_ordered_pair(int i, int j, int m, int n, const FockWindow& w) {
  return normal_ordered_pair(i, j, m, n, w, w.lambda());
}

/// σ_cut(e^{ij}_n) = Σ_m :ψ^i_m ψ̄^j_{n−m}:_cut over m with both slots in the window.
SparseOperator sigma(int i, int j, int n, const FockWindow& w, const Rational& cut);
inline SparseOperator sigma(int i, int j, int n, const FockWindow& w) { return sigma(i, j, n, w, w.lambda()); }

/// Scalar term in [σ(e^{ij}_m), σ(e^{kl}_n)] implied by the CAR and the vacuum
/// conditions: −m δ^{jk} δ^{il} δ_{m+n,0}.
int central_term(int i, int j, int k, int l, int m, int n);

/// Safe states for identity checks with mode-transfer budget `margin`.
FockBasis safe_basis(const FockWindow& w, int margin, int max_grade);

/// Max residual of [σ(e^{ij}_m), σ(e^{kl}_n)] − (δ^{jk}σ(e^{il}_{m+n}) −
/// δ^{il}σ(e^{kj}_{m+n}) + central_term) on the safe subspace.
/// Throws ResolutionError when the window leaves no room for the margin.
double commutator_check(int i, int j, int k, int l, int m, int n, const FockWindow& w, int max_grade = 2);

/// n_{λμ} = #{integers m : λ < m ≤ μ}.
int cut_count(const Rational& lambda, const Rational& mu);

/// |μ⟩ = (Π_{λ<n≤μ} Π_i ψ^i_n)|λ⟩, modes ascending and colors ascending left to right.
FockVector bogoliubov_vacuum(const FockWindow& w, const Rational& mu);

/// |λ⟩ recovered from |μ⟩ by (Π_{−μ≤n<−λ} Π_i ψ̄^i_n), same ordering convention.
FockVector bogoliubov_return(const FockWindow& w, const Rational& mu, const FockVector& mu_vacuum);

/// Residual of σ_μ(e^{ij}_n) − σ_λ(e^{ij}_n) + n_{λμ}δ^{ij}δ_{n,0} on the safe subspace.
double cut_shift_check(int i, int j, int n, const FockWindow& w, const Rational& mu, int max_grade = 2);

/// Finite combination Σ c·e^{ij}_n.
struct LieElement {
  struct Term {
    cplx coeff;
    int i;
    int j;
    int n;
  };
  std::vector<Term> terms;

  /// Color trace of the mode-zero block: Σ c δ^{ij} δ_{n,0}.
  cplx trace() const;
  int max_transfer() const;
};

SparseOperator sigma(const LieElement& k, const FockWindow& w, const Rational& cut);

/// exp(t·op) applied to v by a scaled Taylor series with tail bound below `tail`.
FockVector exp_apply(const SparseOperator& op, cplx t, const FockVector& v, double tail = 1e-12);

/// Residual of exp(tσ_μ(K)) − exp(tσ_λ(K))·exp(−t n_{λμ} Tr K) on the safe subspace.
double projective_equality_check(const LieElement& k, double t, const FockWindow& w, const Rational& mu,
                                 int max_grade = 2);

}  // namespace gerbe
