// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <Eigen/Dense>

#include "gerbe/caloron.hpp"
#include "gerbe/detline.hpp"
#include "gerbe/fock.hpp"
#include "gerbe/lie.hpp"
#include "gerbe/moduli.hpp"
#include "gerbe/spectral.hpp"

using namespace gerbe;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int number, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = s < limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::ostringstream line;
  line << (pass ? "PASS" : "FAIL") << " criterion " << number << " (" << title << "): " << o.detail;
  line.precision(3);
  line << " [" << s << " s of " << limit_s << " s" << (in_time ? "" : ", over the limit") << "]";
  std::cout << line.str() << std::endl;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Eigen::MatrixXcd diag_turns(const std::vector<double>& turns) {
  const auto n = static_cast<Eigen::Index>(turns.size());
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) U(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * turns[k]);
  return U;
}

// U(1), SU(2), SU(3) with degenerate and generic phases, a few conjugated off the diagonal
std::vector<Holonomy> holonomy_suite() {
  struct Case {
    std::vector<double> turns;
    bool special;
    unsigned long long seed;
  };
  const std::vector<Case> cases = {
      {{0.0}, false, 0},          {{0.5}, false, 0},          {{0.3}, false, 0},
      {{0.999}, false, 0},        {{0.125}, false, 0},        {{0.0, 0.0}, true, 0},
      {{0.5, 0.5}, true, 0},      {{0.3, 0.7}, true, 0},      {{0.1, 0.9}, true, 0},
      {{0.3, 0.7}, true, 21},     {{0.45, 0.55}, true, 22},   {{0.0, 0.0, 0.0}, true, 0},
      {{1.0 / 3, 1.0 / 3, 1.0 / 3}, true, 0},                 {{0.1, 0.2, 0.7}, true, 0},
      {{0.0, 0.5, 0.5}, true, 0}, {{0.2, 0.2, 0.6}, true, 0}, {{0.1, 0.2, 0.7}, true, 23},
      {{0.15, 0.15, 0.7}, true, 24}, {{0.05, 0.35, 0.6}, true, 25}, {{2.0 / 3, 2.0 / 3, 2.0 / 3}, true, 0},
  };
  std::vector<Holonomy> out;
  for (const auto& c : cases) {
    Eigen::MatrixXcd U = diag_turns(c.turns);
    if (c.seed != 0) {
      const auto g = random_special_unitary(static_cast<int>(c.turns.size()), c.seed);
      U = g * U * g.adjoint();
    }
    out.push_back(Holonomy::make(U, c.special));
  }
  return out;
}

Outcome cocycle() {
  const int N = 4;
  const auto suite = holonomy_suite();
  double delta_res = 0.0, assoc_res = 0.0;
  long triples = 0, quads = 0;
  for (const auto& h : suite) {
    const Spectrum s = dirac_spectrum(h, N);
    std::vector<SpectralCut> cuts;
    for (int k = -4 * N + 1; k < 4 * N; ++k) {
      SpectralCut c{Rational(k, 4)};
      if (in_cover(s, c)) cuts.push_back(c);
    }
    const std::size_t n = cuts.size();
    std::vector<std::vector<std::optional<DetLine>>> L(n, std::vector<std::optional<DetLine>>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) L[a][b] = det_line(s, cuts[a], cuts[b]);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c) {
          delta_res = std::max(delta_res, std::abs(delta_triviality({*L[a][b], *L[b][c], *L[a][c]}) - 1.0));
          ++triples;
          const DetLine abc = compose(*L[a][b], *L[b][c]);
          for (std::size_t e = c + 1; e < n; ++e) {
            const auto left = compose(abc, *L[c][e]).canonical_phase();
            const auto right = compose(*L[a][b], compose(*L[b][c], *L[c][e])).canonical_phase();
            assoc_res = std::max(assoc_res, std::abs(left - right));
            ++quads;
          }
        }
  }
  return {delta_res <= 1e-12 && assoc_res <= 1e-12 && suite.size() == 20,
          std::to_string(suite.size()) + " holonomies, " + std::to_string(triples) + " triples max|delta-1| = " +
              fmt(delta_res) + ", " + std::to_string(quads) + " quadruples max associativity defect = " +
              fmt(assoc_res)};
}

// Max entry of m - expect·(inclusion of domain into codomain).
double identity_defect(const Eigen::SparseMatrix<cd>& m, double expect, const FockBasis& dom, const FockBasis& cod) {
  double res = 0.0;
  for (int c = 0; c < m.outerSize(); ++c) {
    const auto diag = cod.index_of(dom.states()[c]);
    bool hit = false;
    for (Eigen::SparseMatrix<cd>::InnerIterator it(m, c); it; ++it) {
      const bool on = diag && static_cast<std::size_t>(it.row()) == *diag;
      hit = hit || on;
      res = std::max(res, std::abs(it.value() - (on ? expect : 0.0)));
    }
    if (!hit) res = std::max(res, std::abs(expect));
  }
  return res;
}

Outcome car() {
  const int N = 6;
  double res = 0.0;
  long count = 0;
  std::size_t dom_size = 0;
  for (int colors = 1; colors <= 2; ++colors) {
    const FockWindow w(colors, N, Rational(1, 2));
    const FockBasis dom(w, 3), cod(w, 5);
    dom_size = std::max(dom_size, dom.size());
    std::vector<SparseOperator> psi, bar;
    std::vector<std::pair<int, int>> lab;
    for (int c = 1; c <= colors; ++c)
      for (int m = -N; m <= N; ++m) {
        psi.push_back(SparseOperator::word(w, {ModeOperator::psi(c, m)}));
        bar.push_back(SparseOperator::word(w, {ModeOperator::psibar(c, m)}));
        lab.emplace_back(c, m);
      }
    for (std::size_t a = 0; a < psi.size(); ++a)
      for (std::size_t b = 0; b < psi.size(); ++b) {
        const double d = lab[a].first == lab[b].first && lab[a].second + lab[b].second == 0 ? 1.0 : 0.0;
        res = std::max(res, identity_defect(anticommutator(psi[a], psi[b]).matrix(dom, cod), 0.0, dom, cod));
        res = std::max(res, identity_defect(anticommutator(bar[a], bar[b]).matrix(dom, cod), 0.0, dom, cod));
        res = std::max(res, identity_defect(anticommutator(psi[a], bar[b]).matrix(dom, cod), d, dom, cod));
        res = std::max(res, identity_defect(anticommutator(bar[b], psi[a]).matrix(dom, cod), d, dom, cod));
        count += 4;
      }
  }
  return {res == 0.0, std::to_string(count) + " relations at N=6, colors 1-2, on " + std::to_string(dom_size) +
                          " states of grade <= 3, max defect = " + fmt(res)};
}

Outcome central_extension() {
  const FockWindow w(2, 6, Rational(1, 2));
  double res = 0.0;
  long count = 0;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
          for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
              res = std::max(res, commutator_check(i, j, k, l, m, n, w));
              ++count;
            }
  const auto vac = FockVector::vacuum(w);
  double pairing_res = 0.0, printed = 0.0;
  for (int m = 1; m <= 2; ++m) {
    const cd p = commutator(sigma(1, 1, m, w), sigma(1, 1, -m, w)).apply(vac).amplitude(FockState{});
    pairing_res = std::max(pairing_res, std::abs(p + static_cast<double>(m)));
    printed = std::max(printed, std::abs(p - static_cast<double>(m)));
  }
  return {res == 0.0 && pairing_res == 0.0,
          std::to_string(count) + " commutator cases max residual = " + fmt(res) +
              "; vacuum pairing equals -m (defect " + fmt(pairing_res) + "); the printed +m sign would leave " +
              fmt(printed)};
}

Outcome bogoliubov() {
  const FockWindow w(2, 6, Rational(1, 2));
  double vac_res = 0.0;
  for (const Rational mu : {Rational(3, 2), Rational(5, 2), Rational(7, 3)}) {
    const auto v = bogoliubov_vacuum(w, mu);
    for (int c = 1; c <= 2; ++c)
      for (int k = -6; k <= 6; ++k) {
        if (Rational(k) < mu) vac_res = std::max(vac_res, apply_mode(ModeOperator::psi(c, k), v).max_abs());
        if (Rational(k) <= -mu) vac_res = std::max(vac_res, apply_mode(ModeOperator::psibar(c, k), v).max_abs());
      }
    const auto back = bogoliubov_return(w, mu, v);
    vac_res = std::max(vac_res, std::abs(std::abs(back.amplitude(FockState{})) - 1.0));
  }
  const Rational mu(5, 2);
  double shift_res = 0.0;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int n = -2; n <= 2; ++n) shift_res = std::max(shift_res, cut_shift_check(i, j, n, w, mu));
  // integers in (1/2, 5/2]: 1 and 2
  const int count = cut_count(Rational(1, 2), mu);
  const LieElement k1{{{1.0, 1, 1, 0}}};
  const LieElement k2{{{1.0, 1, 1, 0}, {-1.0, 2, 2, 0}}};
  const LieElement k3{{{1.0, 1, 1, 0}, {0.5, 1, 2, 1}, {-0.5, 2, 1, -1}}};
  double proj = 0.0;
  for (const auto& k : {k1, k2, k3}) proj = std::max(proj, projective_equality_check(k, 0.3, w, Rational(3, 2)));
  return {vac_res == 0.0 && shift_res == 0.0 && count == 2 && proj <= 1e-10,
          "vacuum defect = " + fmt(vac_res) + ", cut shift residual = " + fmt(shift_res) +
              " with n = " + std::to_string(count) + ", projective equality max = " + fmt(proj)};
}

PresetSpec su2_family(int M) {
  PresetSpec s;
  s.name = "su2-family";
  s.n = 2;
  s.grid = Grid(16, M, 3);
  return s;
}

Outcome murray_stevenson() {
  const auto r = ms_identity_check(su2_family(16));
  return {r.order >= 1.9, "su2-family residual " + fmt(r.residual_coarse) + " (M=16) -> " + fmt(r.residual_fine) +
                              " (M=32), order " + fmt(r.order)};
}

double trace_index(const Representation& rho) {
  double num = 0.0, den = 0.0;
  for (std::size_t a = 0; a < rho.images().size(); ++a) {
    num += (rho.images()[a] * rho.images()[a]).trace().real();
    den += (rho.source().basis()[a] * rho.source().basis()[a]).trace().real();
  }
  return num / den;
}

Outcome dynkin_scaling() {
  double scaling = 0.0;
  const auto adj = Representation::adjoint(2);
  for (const std::string name : {"su2-family", "su2-simple", "flat", "abelian", "theta-only", "zero"}) {
    PresetSpec s = su2_family(12);
    s.name = name;
    const auto r = rho_scaling_check(to_caloron(make_preset(s)), adj);
    scaling = std::max(scaling, r.relative());
  }
  struct Case {
    int n;
    std::string name;
    double expect;
  };
  double dyn = 0.0;
  for (const auto& c : std::vector<Case>{{2, "fundamental", 1}, {3, "fundamental", 1}, {4, "fundamental", 1},
                                         {2, "adjoint", 4}, {2, "trivial", 0}}) {
    const auto rep = Representation::named(c.name, c.n);
    dyn = std::max({dyn, std::abs(to_double(rep.dynkin()) - c.expect), std::abs(trace_index(rep) - c.expect)});
  }
  return {scaling <= 1e-8 && dyn <= 1e-12,
          "B and H adjoint/fundamental scaling defect " + fmt(scaling) + "; dynkin 1,1,1,4,0 vs trace oracle defect " +
              fmt(dyn)};
}

Outcome index_agreement() {
  double fund = 0.0, adj = 0.0;
  for (int M : {16, 32}) {
    const auto c = make_preset(su2_family(M));
    const GridForm pont = pontryagin_form(c);
    GridForm f = index_curvature(c, Representation::fundamental(2));
    GridForm a = index_curvature(c, Representation::adjoint(2));
    GridForm df = f;
    df -= pont;
    fund = std::max(fund, df.max_abs() / pont.max_abs());
    GridForm four = 4.0 * f;
    a -= four;
    adj = std::max(adj, a.max_abs() / four.max_abs());
  }
  return {fund <= 1e-12 && adj <= 1e-8,
          "fundamental vs Pontryagin relative " + fmt(fund) + ", adjoint vs 4x fundamental relative " + fmt(adj)};
}

Outcome moduli() {
  const auto r = genus2_su2_example();
  const double rel = relation_check(r);
  const auto v = irreducibility_check(r);
  double conj_res = 0.0;
  int changes = 0;
  for (unsigned long long k = 1; k <= 10; ++k) {
    const auto c = conjugate(r, random_special_unitary(2, 500 + k));
    conj_res = std::max(conj_res, std::abs(relation_check(c) - rel));
    const auto cv = irreducibility_check(c);
    if (cv.irreducible != v.irreducible || cv.commutant_dimension != v.commutant_dimension) ++changes;
  }
  const SpectralCut cut{Rational(1, 3)};
  const int u1 = spectral_flow(u1_winding_loop(1, 64), cut, 3);
  // closed form: the eigenvalue pair e^{±2πit} crosses the cut once each way
  const int balanced = spectral_flow(ModuliFamily{{1, 1, 1}}.holonomy_loop({{{3, 1}}}, 0, 64), cut, 3);
  const bool ok = rel <= 1e-12 && v.irreducible && !v.indeterminate && conj_res <= 1e-12 && changes == 0 && u1 == 1 &&
                  balanced == 0;
  return {ok, "relation " + fmt(rel) + ", commutant dimension " + std::to_string(v.commutant_dimension) +
                  ", 10 conjugations change relation by " + fmt(conj_res) + " and " + std::to_string(changes) +
                  " verdicts; flows U(1) = " + std::to_string(u1) + ", SU(2) balanced = " + std::to_string(balanced)};
}

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome full_suite() {
  const auto dir = std::filesystem::temp_directory_path() / "gerbe_acceptance";
  std::filesystem::create_directories(dir);
  int codes[2];
  for (int k = 0; k < 2; ++k) {
    const auto out = dir / ("all" + std::to_string(k) + ".json");
    const std::string cmd = std::string("\"") + GERBETOOL_PATH + "\" all --seed 0 --out \"" + out.string() + "\" 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    codes[k] = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  const auto a = read_file(dir / "all0.json"), b = read_file(dir / "all1.json");
  const bool stable = a && b && *a == *b;
  return {codes[0] == 0 && codes[1] == 0 && stable,
          "gerbetool all exit codes " + std::to_string(codes[0]) + ", " + std::to_string(codes[1]) + "; reports " +
              (stable ? "byte-identical" : "differ") + " across two runs"};
}

}  // namespace

int main() {
  criterion(1, "determinant-line cocycle", 10, cocycle);
  criterion(2, "CAR algebra", 30, car);
  criterion(3, "central extension", 60, central_extension);
  criterion(4, "Bogoliubov transport", 30, bogoliubov);
  criterion(5, "Murray-Stevenson identity", 180, murray_stevenson);
  criterion(6, "Dynkin scaling", 60, dynkin_scaling);
  criterion(7, "index/caloron curvature", 60, index_agreement);
  criterion(8, "moduli checks", 30, moduli);
  criterion(9, "full suite", 300, full_suite);
  return failures == 0 ? 0 : 1;
}
