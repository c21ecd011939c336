#include "gerbe/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "gerbe/errors.hpp"

namespace gerbe {

namespace {

void check_color(const FockWindow& w, int c) {
  if (c < 1 || c > w.n_colors()) {
    throw ArgumentError("color " + std::to_string(c) + " outside [1, " + std::to_string(w.n_colors()) + "]");
  }
}

void check_cut(const Rational& cut) {
  if (is_integer(cut)) throw ArgumentError("normal-ordering cut " + to_string(cut) + " must not be an integer");
}

}  // namespace

// ---------------------------------------------------------------------------
// window and states

FockWindow::FockWindow(int n_colors, int N, Rational lambda) : n_colors_(n_colors), N_(N), lambda_(lambda) {
  if (n_colors < 1) throw ArgumentError("n_colors must be positive");
  if (N < 1) throw ArgumentError("window size N must be positive");
  if (is_integer(lambda)) throw ArgumentError("reference cut " + to_string(lambda) + " must not be an integer");
  if (!(lambda > Rational(-N) && lambda < Rational(N))) {
    throw RangeError("reference cut " + to_string(lambda) + " must satisfy |lambda| < N = " + std::to_string(N));
  }
  if (slot_count() > kMaxSlots) {
    throw ResourceError("window has " + std::to_string(slot_count()) + " slots; limit is " +
                        std::to_string(kMaxSlots));
  }
}

FockState FockState::from_slots(const std::vector<int>& slots) {
  FockState s;
  for (int k : slots) {
    if (k < 0 || k >= FockWindow::kMaxSlots) throw RangeError("slot index out of range");
    if (s.test(k)) throw ArgumentError("repeated slot in state");
    s.flip(k);
  }
  return s;
}

int FockState::grade() const {
  int g = 0;
  for (auto w : words_) g += std::popcount(w);
  return g;
}

int FockState::count_below(int slot) const {
  int c = 0;
  const int word = slot >> 6;
  for (int k = 0; k < word; ++k) c += std::popcount(words_[k]);
  const int bit = slot & 63;
  if (bit > 0) c += std::popcount(words_[word] & ((std::uint64_t{1} << bit) - 1));
  return c;
}

std::vector<int> FockState::slots() const {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(words_.size()); ++k) {
    auto w = words_[k];
    while (w) {
      int b = std::countr_zero(w);
      out.push_back(k * 64 + b);
      w &= w - 1;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> FockState::particles(const FockWindow& w) const {
  std::vector<std::pair<int, int>> out;
  for (int s : slots())
    if (w.particle_slot(s)) out.emplace_back(w.color_of(s), w.mode_of(s));
  return out;
}

std::vector<std::pair<int, int>> FockState::holes(const FockWindow& w) const {
  std::vector<std::pair<int, int>> out;
  for (int s : slots())
    if (!w.particle_slot(s)) out.emplace_back(w.color_of(s), w.mode_of(s));
  return out;
}

bool FockState::within_margin(const FockWindow& w, int margin) const {
  for (int s : slots())
    if (std::abs(w.mode_of(s)) > w.N() - margin) return false;
  return true;
}

bool basis_less(const FockState& a, const FockState& b) {
  const int ga = a.grade(), gb = b.grade();
  if (ga != gb) return ga < gb;
  return a.slots() < b.slots();
}

// ---------------------------------------------------------------------------
// vectors

FockVector FockVector::vacuum(const FockWindow& w) { return basis_state(w, FockState{}); }

FockVector FockVector::basis_state(const FockWindow& w, const FockState& s) {
  FockVector v(w);
  v.add(s, 1.0);
  return v;
}

void FockVector::add(const FockState& s, cplx amplitude) {
  auto [it, inserted] = terms_.try_emplace(s, amplitude);
  if (!inserted) it->second += amplitude;
  if (std::abs(it->second) <= kZero) terms_.erase(it);
}

cplx FockVector::amplitude(const FockState& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

FockVector& FockVector::operator+=(const FockVector& other) {
  if (!(window_ == other.window_)) throw ArgumentError("adding Fock vectors over different windows");
  for (const auto& [s, a] : other.terms_) add(s, a);
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& other) {
  if (!(window_ == other.window_)) throw ArgumentError("subtracting Fock vectors over different windows");
  for (const auto& [s, a] : other.terms_) add(s, -a);
  return *this;
}

FockVector& FockVector::operator*=(cplx c) {
  for (auto& [s, a] : terms_) a *= c;
  prune();
  return *this;
}

double FockVector::max_abs() const {
  double m = 0.0;
  for (const auto& [s, a] : terms_) m = std::max(m, std::abs(a));
  return m;
}

double FockVector::norm() const {
  double sum = 0.0;
  for (const auto& [s, a] : terms_) sum += std::norm(a);
  return std::sqrt(sum);
}

void FockVector::prune() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) <= kZero; });
}

// ---------------------------------------------------------------------------
// mode operators

std::optional<std::pair<FockState, int>> apply_mode(const ModeOperator& op, const FockWindow& w,
                                                     const FockState& s) {
  const int slot_mode = op.kind == ModeOperator::Kind::Psi ? op.mode : -op.mode;
  const int slot = w.slot(op.color, slot_mode);
  // ψ creates a particle above the cut and fills a hole below it; ψ̄ removes
  // a particle above the cut and opens a hole below it.
  const bool creates = (op.kind == ModeOperator::Kind::Psi) == w.particle_slot(slot);
  if (s.test(slot) == creates) return std::nullopt;
  FockState out = s;
  out.flip(slot);
  const int sign = (s.count_below(slot) % 2 == 0) ? 1 : -1;
  return std::make_pair(out, sign);
}

FockVector apply_mode(const ModeOperator& op, const FockVector& v) {
  const auto& w = v.window();
  check_color(w, op.color);
  if (!w.contains_mode(op.mode)) {
    throw RangeError("mode " + std::to_string(op.mode) + " outside window |m| <= " + std::to_string(w.N()));
  }
  FockVector out(w);
  for (const auto& [s, a] : v.terms()) {
    if (auto r = apply_mode(op, w, s)) out.add_raw(r->first, a * static_cast<double>(r->second));
  }
  out.prune();
  return out;
}

// ---------------------------------------------------------------------------
// basis

FockBasis::FockBasis(const FockWindow& w, int max_grade, int margin) : window_(w) {
  if (max_grade < 0) throw ArgumentError("max_grade must be nonnegative");
  std::vector<int> allowed;
  for (int s = 0; s < w.slot_count(); ++s)
    if (std::abs(w.mode_of(s)) <= w.N() - margin) allowed.push_back(s);
  std::vector<int> chosen;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int remaining) {
    if (remaining == 0) {
      states_.push_back(FockState::from_slots(chosen));
      return;
    }
    for (std::size_t k = from; k < allowed.size(); ++k) {
      chosen.push_back(allowed[k]);
      rec(k + 1, remaining - 1);
      chosen.pop_back();
    }
  };
  for (int g = 0; g <= std::min<int>(max_grade, static_cast<int>(allowed.size())); ++g) rec(0, g);
  for (std::size_t k = 0; k < states_.size(); ++k) index_.emplace(states_[k], k);
}

std::optional<std::size_t> FockBasis::index_of(const FockState& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// operators

SparseOperator SparseOperator::identity(const FockWindow& w) { return word(w, {}, 1.0); }

SparseOperator SparseOperator::word(const FockWindow& w, Word ops, cplx coeff) {
  SparseOperator op(w);
  op.add_word(ops, coeff);
  return op;
}

void SparseOperator::add_word(const Word& word, cplx coeff) {
  for (const auto& letter : word) {
    check_color(window_, letter.color);
    if (!window_.contains_mode(letter.mode)) {
      throw RangeError("mode " + std::to_string(letter.mode) + " outside window");
    }
  }
  auto [it, inserted] = words_.try_emplace(word, coeff);
  if (!inserted) it->second += coeff;
  if (it->second == cplx(0.0)) words_.erase(it);
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& o) {
  if (!(window_ == o.window_)) throw ArgumentError("adding operators over different windows");
  for (const auto& [w, c] : o.words_) add_word(w, c);
  safe_margin_ = std::max(safe_margin_, o.safe_margin_);
  return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& o) {
  if (!(window_ == o.window_)) throw ArgumentError("subtracting operators over different windows");
  for (const auto& [w, c] : o.words_) add_word(w, -c);
  safe_margin_ = std::max(safe_margin_, o.safe_margin_);
  return *this;
}

SparseOperator& SparseOperator::operator*=(cplx c) {
  if (c == cplx(0.0)) {
    words_.clear();
    return *this;
  }
  for (auto& [w, coeff] : words_) coeff *= c;
  return *this;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (!(a.window_ == b.window_)) throw ArgumentError("multiplying operators over different windows");
  SparseOperator out(a.window_, std::max(a.safe_margin_, b.safe_margin_));
  for (const auto& [wa, ca] : a.words_) {
    for (const auto& [wb, cb] : b.words_) {
      SparseOperator::Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_word(w, ca * cb);
    }
  }
  return out;
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) { return a * b - b * a; }
SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b) { return a * b + b * a; }

FockVector SparseOperator::apply(const FockState& s) const {
  FockVector out(window_);
  for (const auto& [word, coeff] : words_) {
    FockState cur = s;
    int sign = 1;
    bool alive = true;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      auto r = apply_mode(*it, window_, cur);
      if (!r) {
        alive = false;
        break;
      }
      cur = r->first;
      sign *= r->second;
    }
    if (alive) out.add_raw(cur, coeff * static_cast<double>(sign));
  }
  out.prune();
  return out;
}

FockVector SparseOperator::apply(const FockVector& v) const {
  if (!(v.window() == window_)) throw ArgumentError("operator and vector windows differ");
  FockVector out(window_);
  for (const auto& [s, a] : v.terms()) {
    const FockVector image = apply(s);
    for (const auto& [t, b] : image.terms()) out.add_raw(t, a * b);
  }
  out.prune();
  return out;
}

double SparseOperator::coefficient_norm() const {
  double n = 0.0;
  for (const auto& [w, c] : words_) n += std::abs(c);
  return n;
}

Eigen::SparseMatrix<cplx> SparseOperator::matrix(const FockBasis& domain, const FockBasis& codomain) const {
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (std::size_t col = 0; col < domain.size(); ++col) {
    const FockVector image = apply(domain.states()[col]);
    for (const auto& [t, a] : image.terms()) {
      if (auto row = codomain.index_of(t)) triplets.emplace_back(static_cast<int>(*row), static_cast<int>(col), a);
    }
  }
  Eigen::SparseMatrix<cplx> m(static_cast<Eigen::Index>(codomain.size()), static_cast<Eigen::Index>(domain.size()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

// ---------------------------------------------------------------------------
// second-quantized loop algebra

SparseOperator normal_ordered_pair(int i, int j, int m, int n, const FockWindow& w, const Rational& cut) {
  check_cut(cut);
  const auto a = ModeOperator::psi(i, m);
  const auto b = ModeOperator::psibar(j, n);
  if (Rational(m) > cut) return SparseOperator::word(w, {a, b}, 1.0);
  return SparseOperator::word(w, {b, a}, -1.0);
}

SparseOperator sigma(int i, int j, int n, const FockWindow& w, const Rational& cut) {
  check_color(w, i);
  check_color(w, j);
  if (std::abs(n) > 2 * w.N()) throw RangeError("mode transfer " + std::to_string(n) + " exceeds 2N");
  SparseOperator op(w, std::abs(n));
  for (int m = -w.N(); m <= w.N(); ++m) {
    if (!w.contains_mode(m - n)) continue;
    op += normal_ordered_pair(i, j, m, n - m, w, cut);
  }
  op.set_safe_margin(std::abs(n));
  return op;
}

int central_term(int i, int j, int k, int l, int m, int n) {
  return (j == k && i == l && m + n == 0) ? -m : 0;
}

FockBasis safe_basis(const FockWindow& w, int margin, int max_grade) {
  const auto cut_reach = ceil(Rational(std::abs(w.lambda().numerator()), w.lambda().denominator()));
  if (w.N() - margin < cut_reach) {
    throw ResolutionError("window N = " + std::to_string(w.N()) + " leaves no safe modes for margin " +
                          std::to_string(margin) + "; increase N");
  }
  return FockBasis(w, max_grade, margin);
}

double commutator_check(int i, int j, int k, int l, int m, int n, const FockWindow& w, int max_grade) {
  for (int c : {i, j, k, l}) check_color(w, c);
  const int margin = std::abs(m) + std::abs(n);
  FockBasis safe = safe_basis(w, margin, max_grade);
  const auto a = sigma(i, j, m, w);
  const auto b = sigma(k, l, n, w);
  SparseOperator rhs(w);
  if (j == k) rhs += sigma(i, l, m + n, w);
  if (i == l) rhs -= sigma(k, j, m + n, w);
  if (int c = central_term(i, j, k, l, m, n); c != 0) rhs += static_cast<double>(c) * SparseOperator::identity(w);

  double residual = 0.0;
  for (const auto& s : safe.states()) {
    FockVector v = FockVector::basis_state(w, s);
    FockVector lhs = a.apply(b.apply(v)) - b.apply(a.apply(v));
    residual = std::max(residual, (lhs - rhs.apply(v)).max_abs());
  }
  return residual;
}

int cut_count(const Rational& lambda, const Rational& mu) {
  if (mu < lambda) return -cut_count(mu, lambda);
  return static_cast<int>(floor(mu) - floor(lambda));
}

FockVector bogoliubov_vacuum(const FockWindow& w, const Rational& mu) {
  check_cut(mu);
  if (!(mu > w.lambda())) throw ArgumentError("Bogoliubov target cut must exceed the reference cut");
  if (floor(mu) > w.N()) {
    throw RangeError("modes up to " + std::to_string(floor(mu)) + " exit the window N = " + std::to_string(w.N()));
  }
  FockVector v = FockVector::vacuum(w);
  // rightmost factor acts first: highest mode, highest color
  for (auto mode = floor(mu); Rational(mode) > w.lambda(); --mode) {
    for (int c = w.n_colors(); c >= 1; --c) v = apply_mode(ModeOperator::psi(c, static_cast<int>(mode)), v);
  }
  return v;
}

FockVector bogoliubov_return(const FockWindow& w, const Rational& mu, const FockVector& mu_vacuum) {
  check_cut(mu);
  if (!(mu > w.lambda())) throw ArgumentError("Bogoliubov target cut must exceed the reference cut");
  FockVector v = mu_vacuum;
  const auto lo = ceil(-mu);
  const auto hi = ceil(-w.lambda()) - 1;  // largest integer < -λ
  if (lo < -w.N()) throw RangeError("return product leaves the window");
  for (auto mode = hi; mode >= lo; --mode) {
    for (int c = w.n_colors(); c >= 1; --c) v = apply_mode(ModeOperator::psibar(c, static_cast<int>(mode)), v);
  }
  return v;
}

double cut_shift_check(int i, int j, int n, const FockWindow& w, const Rational& mu, int max_grade) {
  check_cut(mu);
  if (!(mu > w.lambda())) throw ArgumentError("cut_shift_check needs mu > lambda");
  if (floor(mu) > w.N()) throw RangeError("cut " + to_string(mu) + " exits the window");
  FockBasis safe = safe_basis(w, std::abs(n), max_grade);
  SparseOperator diff = sigma(i, j, n, w, mu) - sigma(i, j, n, w, w.lambda());
  if (i == j && n == 0) diff += static_cast<double>(cut_count(w.lambda(), mu)) * SparseOperator::identity(w);
  double residual = 0.0;
  for (const auto& s : safe.states()) residual = std::max(residual, diff.apply(s).max_abs());
  return residual;
}

cplx LieElement::trace() const {
  cplx t = 0.0;
  for (const auto& term : terms)
    if (term.i == term.j && term.n == 0) t += term.coeff;
  return t;
}

int LieElement::max_transfer() const {
  int m = 0;
  for (const auto& term : terms) m = std::max(m, std::abs(term.n));
  return m;
}

SparseOperator sigma(const LieElement& k, const FockWindow& w, const Rational& cut) {
  SparseOperator op(w, k.max_transfer());
  for (const auto& term : k.terms) op += term.coeff * sigma(term.i, term.j, term.n, w, cut);
  return op;
}

FockVector exp_apply(const SparseOperator& op, cplx t, const FockVector& v, double tail) {
  constexpr int kMaxTerms = 60;
  const double bound = std::abs(t) * op.coefficient_norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * bound)));
  const double r = bound / steps;
  // smallest K with steps·‖v‖·r^{K+1}/(K+1)!·e^r below the tail bound
  const double scale = steps * std::max(v.norm(), 1.0) * std::exp(r);
  int order = 0;
  double term_bound = r;  // r^{K+1}/(K+1)! for K = 0
  while (scale * term_bound >= tail) {
    ++order;
    if (order > kMaxTerms) throw PrecisionError("exponential series did not reach the tail bound");
    term_bound *= r / (order + 1);
  }
  const cplx tau = t / static_cast<double>(steps);
  FockVector result = v;
  for (int step = 0; step < steps; ++step) {
    FockVector term = result;
    FockVector acc = result;
    for (int k = 1; k <= order; ++k) {
      term = op.apply(term);
      term *= tau / static_cast<double>(k);
      acc += term;
    }
    result = std::move(acc);
  }
  return result;
}

double projective_equality_check(const LieElement& k, double t, const FockWindow& w, const Rational& mu,
                                 int max_grade) {
  if (std::abs(t) > 1.0) throw ArgumentError("projective_equality_check needs |t| <= 1");
  check_cut(mu);
  if (!(mu > w.lambda())) throw ArgumentError("projective_equality_check needs mu > lambda");
  if (floor(mu) > w.N()) throw RangeError("cut " + to_string(mu) + " exits the window");
  FockBasis safe = safe_basis(w, k.max_transfer(), max_grade);
  const auto sig_mu = sigma(k, w, mu);
  const auto sig_lambda = sigma(k, w, w.lambda());
  const cplx factor = std::exp(-t * static_cast<double>(cut_count(w.lambda(), mu)) * k.trace());
  double residual = 0.0;
  for (const auto& s : safe.states()) {
    FockVector v = FockVector::basis_state(w, s);
    FockVector lhs = exp_apply(sig_mu, t, v);
    FockVector rhs = factor * exp_apply(sig_lambda, t, v);
    residual = std::max(residual, (lhs - rhs).max_abs());
  }
  return residual;
}

}  // namespace gerbe
