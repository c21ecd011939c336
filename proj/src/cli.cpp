#include "gerbe/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <tuple>
#include <sstream>

#include <openssl/evp.h>

#include "gerbe/caloron.hpp"
#include "gerbe/detline.hpp"
#include "gerbe/fock.hpp"
#include "gerbe/lie.hpp"
#include "gerbe/moduli.hpp"
#include "gerbe/spectral.hpp"

#ifndef GERBE_VERSION
#define GERBE_VERSION "0.0.0"
#endif

namespace gerbe::cli {

namespace {

using Clock = std::chrono::steady_clock;
using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// schema

struct Param {
  std::string key;
  std::string type;  // int, number, bool, string, rational, number_list, int_list, string_list, phase_lists, word
  json def;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::string doc;
};

using ParamTable = std::vector<Param>;

const std::map<std::string, ParamTable>& tables() {
  static const std::map<std::string, ParamTable> t = {
      {"spectrum",
       {{"phases", "number_list", {0.3, 0.7}, -1e6, 1e6, "holonomy eigenphases in turns"},
        {"special", "bool", true, 0, 0, "require det U = 1"},
        {"window", "int", 4, 1, 64, "mode window N"},
        {"flow_steps", "int", 64, 8, 4096, "samples per winding loop"}}},
      {"cover",
       {{"phases", "number_list", {0.3, 0.7}, -1e6, 1e6, "holonomy eigenphases in turns"},
        {"special", "bool", true, 0, 0, "require det U = 1"},
        {"window", "int", 4, 1, 64, "mode window N"},
        {"cuts", "string_list", {"-3/2", "-1/2", "0", "1/2", "3/2", "7/3"}, 0, 0, "rational cuts"},
        {"gap_tolerance", "number", 1e-9, 1e-15, 0.5, "cover gap tolerance"}}},
      {"cocycle",
       {{"phases", "phase_lists", json::array(), -1e6, 1e6, "holonomies as phase lists; empty selects the 20-case suite"},
        {"window", "int", 4, 1, 16, "mode window N"},
        {"cut_denominator", "int", 3, 1, 8, "cuts are k/denominator inside the window"}}},
      {"fock",
       {{"N", "int", 6, 2, 12, "mode window"},
        {"colors", "int", 2, 1, 4, "largest number of colors; every count up to it is checked"},
        {"sweep", "int", 2, 0, 4, "|m|, |n| bound for the commutator sweep"},
        {"lambda", "rational", "1/2", 0, 0, "reference cut"},
        {"mu", "rational", "3/2", 0, 0, "shifted cut, mu > lambda"},
        {"max_grade", "int", 2, 0, 4, "excitation grade of the safe subspace"},
        {"car_grade", "int", 2, 0, 3, "excitation grade of the CAR domain"},
        {"t", "number", 0.3, -1.0, 1.0, "exponential parameter"}}},
      {"caloron",
       {{"preset", "string", "su2-family", 0, 0, "connection preset"},
        {"n", "int", 2, 2, 4, "su(n)"},
        {"P", "int", 16, 8, 64, "theta samples, even"},
        {"M", "int", 16, 5, 48, "coarse base samples per axis; the fine grid uses 2M"},
        {"amplitude", "number", 0.6, 0.0, 10.0, "preset amplitude"},
        {"higgs", "number", 0.8, 0.0, 10.0, "preset Higgs amplitude"},
        {"min_order", "number", 1.9, 0.0, 10.0, "required convergence order"},
        {"reps", "string_list", {"adjoint", "spin-3"}, 0, 0, "representations for the scaling check"}}},
      {"moduli",
       {{"conjugations", "int", 10, 1, 100, "pseudorandom conjugations"},
        {"flow_steps", "int", 64, 8, 4096, "samples per loop"},
        {"window", "int", 3, 1, 16, "mode window for spectral flow"},
        {"windings", "int_list", {1, 1, 1}, -8, 8, "family windings"}}},
      {"pairing",
       {{"windings", "int_list", {1, 1, 1}, -8, 8, "family windings"},
        {"gamma", "word", {{3, 1}, {4, 1}, {1, 1}}, 0, 0, "loop word as (generator, +-1) pairs"},
        {"rep", "string", "adjoint", 0, 0, "representation"},
        {"P", "int", 8, 8, 64, "theta samples, even"},
        {"M", "int", 8, 8, 32, "base samples per axis"},
        {"amplitude", "number", 0.5, 0.0, 10.0, "connection amplitude"}}},
      {"all", {}},
  };
  return t;
}

[[noreturn]] void bad(const std::string& key, const std::string& msg) { throw ConfigError(key, key + ": " + msg); }

bool is_int(const json& v) { return v.is_number_integer(); }

void check_range(const std::string& key, double v, const Param& p) {
  if (!(v >= p.lo && v <= p.hi)) {
    std::ostringstream os;
    os << "value " << v << " outside [" << p.lo << ", " << p.hi << "]";
    bad(key, os.str());
  }
}

void check_value(const std::string& key, const json& v, const Param& p) {
  const auto& t = p.type;
  if (t == "int") {
    if (!is_int(v)) bad(key, "expected an integer");
    check_range(key, v.get<double>(), p);
  } else if (t == "number") {
    if (!v.is_number()) bad(key, "expected a number");
    check_range(key, v.get<double>(), p);
  } else if (t == "bool") {
    if (!v.is_boolean()) bad(key, "expected true or false");
  } else if (t == "string") {
    if (!v.is_string()) bad(key, "expected a string");
  } else if (t == "rational") {
    if (!v.is_string()) bad(key, "expected a rational as a string, e.g. \"1/2\"");
    try {
      parse_rational(v.get<std::string>());
    } catch (const Error& e) {
      bad(key, e.what());
    }
  } else if (t == "number_list" || t == "int_list" || t == "string_list") {
    if (!v.is_array() || v.empty()) bad(key, "expected a nonempty list");
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string ek = key + "[" + std::to_string(k) + "]";
      if (t == "string_list") {
        if (!v[k].is_string()) bad(ek, "expected a string");
      } else {
        if (t == "int_list" ? !is_int(v[k]) : !v[k].is_number()) bad(ek, "expected a number");
        check_range(ek, v[k].get<double>(), p);
      }
    }
  } else if (t == "phase_lists") {
    if (!v.is_array()) bad(key, "expected a list of phase lists");
    for (std::size_t k = 0; k < v.size(); ++k) {
      Param inner = p;
      inner.type = "number_list";
      check_value(key + "[" + std::to_string(k) + "]", v[k], inner);
    }
  } else if (t == "word") {
    if (!v.is_array() || v.empty()) bad(key, "expected a nonempty list of [generator, exponent] pairs");
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string ek = key + "[" + std::to_string(k) + "]";
      const auto& l = v[k];
      if (!l.is_array() || l.size() != 2 || !is_int(l[0]) || !is_int(l[1])) bad(ek, "expected [generator, exponent]");
      if (l[0].get<int>() < 1 || l[0].get<int>() > 4) bad(ek, "generator index outside [1, 4]");
      if (l[1].get<int>() != 1 && l[1].get<int>() != -1) bad(ek, "exponent must be 1 or -1");
    }
  }
}

Rational rat(const json& v) { return parse_rational(v.get<std::string>()); }

std::vector<double> numbers(const json& v) { return v.get<std::vector<double>>(); }

double frac_sum(const std::vector<double>& phases) {
  double s = 0.0;
  for (double p : phases) s += p;
  return std::abs(s - std::round(s));
}

// Checks that need more than one key or knowledge of the library.
void cross_validate(const std::string& command, const json& p) {
  auto special_phases = [&](const char* key) {
    if (p.value("special", false) && frac_sum(numbers(p.at(key))) > 1e-12) {
      bad(std::string("params.") + key, "phases do not sum to an integer but special is set");
    }
  };
  if (command == "spectrum") special_phases("phases");
  if (command == "cover") {
    special_phases("phases");
    const int N = p.at("window").get<int>();
    const auto& cuts = p.at("cuts");
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      const std::string key = "params.cuts[" + std::to_string(k) + "]";
      Rational c;
      try {
        c = rat(cuts[k]);
      } catch (const Error& e) {
        bad(key, e.what());
      }
      if (!(c > Rational(-N) && c < Rational(N))) bad(key, "cut outside (-window, window)");
    }
  }
  if (command == "fock") {
    const int N = p.at("N").get<int>();
    const Rational lam = rat(p.at("lambda")), mu = rat(p.at("mu"));
    try {
      FockWindow w(p.at("colors").get<int>(), N, lam);
    } catch (const ResourceError& e) {
      bad("params.colors", e.what());
    } catch (const Error& e) {
      bad("params.lambda", e.what());
    }
    if (!(mu > lam)) bad("params.mu", "must exceed lambda");
    if (is_integer(mu) || floor(mu) > N - 1) bad("params.mu", "must be a non-integer with floor(mu) < N");
    if (N - 2 * p.at("sweep").get<int>() < ceil(abs(lam))) bad("params.sweep", "window too small for the sweep");
  }
  if (command == "caloron") {
    const auto& names = preset_names();
    const auto preset = p.at("preset").get<std::string>();
    if (std::find(names.begin(), names.end(), preset) == names.end()) bad("params.preset", "unknown preset " + preset);
    if (p.at("P").get<int>() % 2 != 0) bad("params.P", "must be even");
    const int n = p.at("n").get<int>();
    if (preset.rfind("su2", 0) == 0 && n != 2) bad("params.n", "preset " + preset + " needs n = 2");
    if (preset.rfind("su3", 0) == 0 && n != 3) bad("params.n", "preset " + preset + " needs n = 3");
    for (std::size_t k = 0; k < p.at("reps").size(); ++k) {
      const std::string key = "params.reps[" + std::to_string(k) + "]";
      try {
        Representation::named(p.at("reps")[k].get<std::string>(), n);
      } catch (const Error& e) {
        bad(key, e.what());
      }
    }
  }
  if (command == "moduli" || command == "pairing") {
    if (p.at("windings").size() != 3) bad("params.windings", "expected three windings");
  }
  if (command == "pairing") {
    if (p.at("P").get<int>() % 2 != 0) bad("params.P", "must be even");
    try {
      Representation::named(p.at("rep").get<std::string>(), 2);
    } catch (const Error& e) {
      bad("params.rep", e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// checks

CheckRecord verdict(const std::string& name, double residual, double tolerance, const std::string& cmp = "<=") {
  CheckRecord r{name, "fail", residual, tolerance, cmp, 0.0};
  const bool ok = cmp == "<=" ? residual <= tolerance : residual >= tolerance;
  if (ok) r.status = "pass";
  return r;
}

class Runner {
 public:
  explicit Runner(Report& r) : report_(r) {}

  void add(const std::function<CheckRecord()>& f) {
    const auto t0 = Clock::now();
    CheckRecord c = f();
    c.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    report_.checks.push_back(std::move(c));
  }
  json& data(const std::string& command) { return report_.data[command]; }

 private:
  Report& report_;
};

Holonomy diagonal_holonomy(const std::vector<double>& phases, bool special) {
  return Holonomy::diagonal(phases, special);
}

double nearest_distance(double x, const std::vector<double>& ys) {
  double best = std::numeric_limits<double>::infinity();
  for (double y : ys) best = std::min(best, std::abs(x - y));
  return best;
}

std::vector<Holonomy> balanced_loop(int steps) {
  std::vector<Holonomy> path;
  for (int k = 0; k <= steps; ++k) {
    const double t = k == steps ? 0.0 : static_cast<double>(k) / steps;
    const double turns[2] = {t, t == 0.0 ? 0.0 : 1.0 - t};
    path.push_back(Holonomy::diagonal(turns, true));
  }
  return path;
}

std::vector<Holonomy> concatenate(const std::vector<Holonomy>& a, const std::vector<Holonomy>& b) {
  std::vector<Holonomy> out(a.begin(), a.end() - 1);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void run_spectrum(const json& p, std::int64_t, Runner& run) {
  const auto phases = numbers(p.at("phases"));
  const Holonomy h = diagonal_holonomy(phases, p.at("special").get<bool>());
  const int N = p.at("window").get<int>();
  const int steps = p.at("flow_steps").get<int>();
  const Spectrum s = dirac_spectrum(h, N);
  json& d = run.data("spectrum");
  d["eigenvalues"] = json::array();
  for (const auto& m : s.modes()) d["eigenvalues"].push_back(m.eigenvalue);

  run.add([&] {
    // interior eigenvalues only: the two windows differ by the log branch at the edges
    const auto dense = fourier_truncated_eigenvalues(h, N);
    std::vector<double> lib;
    for (const auto& m : s.modes()) lib.push_back(m.eigenvalue);
    const double edge = N - 0.75;
    double res = 0.0;
    for (double x : lib)
      if (std::abs(x) < edge) res = std::max(res, nearest_distance(x, dense));
    for (double x : dense)
      if (std::abs(x) < edge) res = std::max(res, nearest_distance(x, lib));
    return verdict("spectrum.dense_agreement", res, 1e-10);
  });
  const SpectralCut cut{Rational(1, 3)};
  const int window = std::max(N, 2);
  run.add([&] {
    const int flow = spectral_flow(u1_winding_loop(1, steps), cut, window);
    d["flow_u1_winding"] = flow;
    return verdict("spectrum.flow_u1_winding", std::abs(flow - 1), 0.0);
  });
  run.add([&] {
    const int flow = spectral_flow(balanced_loop(steps), cut, window);
    d["flow_su2_balanced"] = flow;
    return verdict("spectrum.flow_su2_balanced", std::abs(flow), 0.0);
  });
  run.add([&] {
    const int f1 = spectral_flow(u1_winding_loop(1, steps), cut, window);
    const int f2 = spectral_flow(u1_winding_loop(2, 2 * steps), cut, window);
    const int f12 = spectral_flow(concatenate(u1_winding_loop(1, steps), u1_winding_loop(2, 2 * steps)), cut, window);
    return verdict("spectrum.flow_additivity", std::abs(f12 - f1 - f2), 0.0);
  });
}

void run_cover(const json& p, std::int64_t, Runner& run) {
  const Holonomy h = diagonal_holonomy(numbers(p.at("phases")), p.at("special").get<bool>());
  const int N = p.at("window").get<int>();
  const double tol = p.at("gap_tolerance").get<double>();
  const Spectrum s = dirac_spectrum(h, N);
  std::vector<SpectralCut> cuts;
  for (const auto& c : p.at("cuts")) cuts.push_back({rat(c), tol});
  std::sort(cuts.begin(), cuts.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });

  json& d = run.data("cover");
  d["membership"] = json::array();
  std::vector<SpectralCut> admissible;
  for (const auto& c : cuts) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& m : s.modes()) gap = std::min(gap, std::abs(m.eigenvalue - to_double(c.lambda)));
    const bool in = in_cover(s, c);
    if (in) admissible.push_back(c);
    d["membership"].push_back({{"cut", to_string(c.lambda)}, {"gap", gap}, {"in_cover", in}});
  }

  run.add([&] {
    int violations = 0;
    for (const auto& c : cuts) {
      SpectralCut finer = c;
      finer.gap_tolerance = c.gap_tolerance / 2.0;
      if (in_cover(s, c) && !in_cover(s, finer)) ++violations;
    }
    return verdict("cover.monotone", violations, 0.0);
  });
  run.add([&] {
    int mismatches = 0;
    for (std::size_t a = 0; a < admissible.size(); ++a)
      for (std::size_t b = a + 1; b < admissible.size(); ++b)
        for (std::size_t c = b + 1; c < admissible.size(); ++c) {
          auto lo = band(s, admissible[a], admissible[b]);
          const auto hi = band(s, admissible[b], admissible[c]);
          lo.insert(lo.end(), hi.begin(), hi.end());
          if (lo != band(s, admissible[a], admissible[c])) ++mismatches;
        }
    return verdict("cover.band_additivity", mismatches, 0.0);
  });
  run.add([&] {
    // closed-form count of m + phase in (a, b) with |m| <= N
    int mismatches = 0;
    for (std::size_t a = 0; a < admissible.size(); ++a)
      for (std::size_t b = a + 1; b < admissible.size(); ++b) {
        const double lo = to_double(admissible[a].lambda), hi = to_double(admissible[b].lambda);
        long expect = 0;
        for (double ph : h.phases()) {
          const long first = std::max<long>(-N, static_cast<long>(std::floor(lo - ph)) + 1);
          const long last = std::min<long>(N, static_cast<long>(std::ceil(hi - ph)) - 1);
          expect += std::max<long>(0, last - first + 1);
        }
        if (static_cast<long>(band(s, admissible[a], admissible[b]).size()) != expect) ++mismatches;
      }
    return verdict("cover.band_count", mismatches, 0.0);
  });
}

struct SuiteCase {
  std::vector<double> phases;
  bool special;
  int conjugate_seed;  // 0: diagonal
};

std::vector<Holonomy> holonomy_suite(std::int64_t seed) {
  const std::vector<SuiteCase> cases = {
      {{0.0}, false, 0},                 {{0.25}, false, 0},
      {{0.5}, false, 0},                 {{0.3}, false, 0},
      {{0.999}, false, 0},               {{0.0, 0.0}, true, 0},
      {{0.5, 0.5}, true, 0},             {{0.3, 0.7}, true, 0},
      {{0.1, 0.9}, true, 0},             {{0.25, 0.75}, true, 0},
      {{0.3, 0.7}, true, 1},             {{0.0, 0.0, 0.0}, true, 0},
      {{1.0 / 3, 1.0 / 3, 1.0 / 3}, true, 0}, {{0.1, 0.2, 0.7}, true, 0},
      {{0.0, 0.5, 0.5}, true, 0},        {{0.2, 0.2, 0.6}, true, 0},
      {{0.1, 0.2, 0.7}, true, 2},        {{0.15, 0.15, 0.7}, true, 3},
      {{0.3, 0.4}, false, 0},            {{0.1, 0.1, 0.5}, false, 4},
  };
  std::vector<Holonomy> out;
  for (const auto& c : cases) {
    const auto n = static_cast<Eigen::Index>(c.phases.size());
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) U(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * c.phases[k]);
    if (c.conjugate_seed != 0) {
      const Eigen::MatrixXcd g = random_special_unitary(static_cast<int>(n), seed * 100 + c.conjugate_seed);
      U = g * U * g.adjoint();
    }
    out.push_back(Holonomy::make(U, c.special));
  }
  return out;
}

struct CutLines {
  std::vector<SpectralCut> cuts;
  std::vector<std::vector<std::optional<DetLine>>> lines;
};

CutLines cut_lines(const Holonomy& h, int N, const std::vector<Rational>& values) {
  const Spectrum s = dirac_spectrum(h, N);
  CutLines out;
  for (const auto& v : values) {
    SpectralCut c{v};
    if (in_cover(s, c)) out.cuts.push_back(c);
  }
  const std::size_t k = out.cuts.size();
  out.lines.assign(k, std::vector<std::optional<DetLine>>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) out.lines[a][b] = det_line(s, out.cuts[a], out.cuts[b]);
  return out;
}

void run_cocycle(const json& p, std::int64_t seed, Runner& run) {
  const int N = p.at("window").get<int>();
  const int den = p.at("cut_denominator").get<int>();
  std::vector<Holonomy> hols;
  if (p.at("phases").empty()) {
    hols = holonomy_suite(seed);
  } else {
    for (const auto& ph : p.at("phases")) hols.push_back(diagonal_holonomy(numbers(ph), false));
  }
  std::vector<Rational> values;
  for (int k = -den * N + 1; k < den * N; ++k) values.emplace_back(k, den);

  json& d = run.data("cocycle");
  d["holonomies"] = hols.size();
  run.add([&] {
    double res = 0.0;
    long triples = 0;
    for (const auto& h : hols) {
      const auto cl = cut_lines(h, N, values);
      const auto& L = cl.lines;
      const std::size_t k = cl.cuts.size();
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          for (std::size_t c = b + 1; c < k; ++c) {
            res = std::max(res, std::abs(delta_triviality({*L[a][b], *L[b][c], *L[a][c]}) - 1.0));
            ++triples;
          }
    }
    d["triples"] = triples;
    return verdict("cocycle.delta_triviality", res, 1e-12);
  });
  run.add([&] {
    double res = 0.0;
    long quadruples = 0;
    for (const auto& h : hols) {
      const auto cl = cut_lines(h, N, values);
      const auto& L = cl.lines;
      const std::size_t k = cl.cuts.size();
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          for (std::size_t c = b + 1; c < k; ++c) {
            const DetLine abc = compose(*L[a][b], *L[b][c]);
            for (std::size_t e = c + 1; e < k; ++e) {
              const auto left = compose(abc, *L[c][e]).canonical_phase();
              const auto right = compose(*L[a][b], compose(*L[b][c], *L[c][e])).canonical_phase();
              res = std::max(res, std::abs(left - right));
              ++quadruples;
            }
          }
    }
    d["quadruples"] = quadruples;
    return verdict("cocycle.associativity", res, 1e-12);
  });
}

// Max entry of M - expect·I over the domain, I the inclusion into the codomain.
double identity_residual(const Eigen::SparseMatrix<cd>& m, double expect, const FockBasis& domain,
                         const FockBasis& codomain) {
  double res = 0.0;
  std::vector<long> diag(domain.size(), -1);
  for (std::size_t c = 0; c < domain.size(); ++c) {
    auto r = codomain.index_of(domain.states()[c]);
    diag[c] = r ? static_cast<long>(*r) : -1;
    if (!r) throw ConsistencyError("domain state missing from the codomain basis");
  }
  for (int c = 0; c < m.outerSize(); ++c) {
    bool seen = false;
    for (Eigen::SparseMatrix<cd>::InnerIterator it(m, c); it; ++it) {
      const bool on_diag = it.row() == diag[c];
      seen = seen || on_diag;
      res = std::max(res, std::abs(it.value() - (on_diag ? expect : 0.0)));
    }
    if (!seen) res = std::max(res, std::abs(expect));
  }
  return res;
}

void run_fock(const json& p, std::int64_t, Runner& run) {
  const int N = p.at("N").get<int>();
  const int colors = p.at("colors").get<int>();
  const int sweep = p.at("sweep").get<int>();
  const int grade = p.at("max_grade").get<int>();
  const int car_grade = p.at("car_grade").get<int>();
  const Rational lam = rat(p.at("lambda")), mu = rat(p.at("mu"));
  const double t = p.at("t").get<double>();
  json& d = run.data("fock");

  run.add([&] {
    double res = 0.0;
    long relations = 0;
    for (int nc = 1; nc <= colors; ++nc) {
      const FockWindow w(nc, N, lam);
      const FockBasis domain(w, car_grade), codomain(w, car_grade + 2);
      std::vector<SparseOperator> psi, bar;
      std::vector<std::pair<int, int>> labels;
      for (int c = 1; c <= nc; ++c)
        for (int m = -N; m <= N; ++m) {
          psi.push_back(SparseOperator::word(w, {ModeOperator::psi(c, m)}));
          bar.push_back(SparseOperator::word(w, {ModeOperator::psibar(c, m)}));
          labels.emplace_back(c, m);
        }
      for (std::size_t a = 0; a < psi.size(); ++a)
        for (std::size_t b = 0; b < psi.size(); ++b) {
          const double delta =
              labels[a].first == labels[b].first && labels[a].second + labels[b].second == 0 ? 1.0 : 0.0;
          res = std::max(res, identity_residual(anticommutator(psi[a], psi[b]).matrix(domain, codomain), 0.0, domain,
                                                codomain));
          res = std::max(res, identity_residual(anticommutator(bar[a], bar[b]).matrix(domain, codomain), 0.0, domain,
                                                codomain));
          res = std::max(res, identity_residual(anticommutator(psi[a], bar[b]).matrix(domain, codomain), delta,
                                                domain, codomain));
          res = std::max(res, identity_residual(anticommutator(bar[b], psi[a]).matrix(domain, codomain), delta,
                                                domain, codomain));
          relations += 4;
        }
    }
    d["car_relations"] = relations;
    return verdict("fock.car", res, 0.0);
  });

  const FockWindow w(colors, N, lam);
  run.add([&] {
    double res = 0.0;
    long count = 0;
    for (int i = 1; i <= colors; ++i)
      for (int j = 1; j <= colors; ++j)
        for (int k = 1; k <= colors; ++k)
          for (int l = 1; l <= colors; ++l)
            for (int m = -sweep; m <= sweep; ++m)
              for (int n = -sweep; n <= sweep; ++n) {
                res = std::max(res, commutator_check(i, j, k, l, m, n, w, grade));
                ++count;
              }
    d["commutator_cases"] = count;
    return verdict("fock.commutator", res, 0.0);
  });
  run.add([&] {
    // ⟨λ|[σ(e^{ij}_m), σ(e^{ji}_{-m})]|λ⟩ against the integer coefficient -m
    const auto vac = FockVector::vacuum(w);
    double res = 0.0, printed = 0.0;
    for (int i = 1; i <= colors; ++i)
      for (int j = 1; j <= colors; ++j)
        for (int m = 1; m <= std::max(sweep, 1); ++m) {
          const cd pairing = commutator(sigma(i, j, m, w), sigma(j, i, -m, w)).apply(vac).amplitude(FockState{});
          res = std::max(res, std::abs(pairing - static_cast<double>(central_term(i, j, j, i, m, -m))));
          res = std::max(res, std::abs(static_cast<double>(central_term(i, j, j, i, m, -m)) + m));
          printed = std::max(printed, std::abs(pairing - static_cast<double>(m)));
        }
    d["printed_sign_vacuum_residual"] = printed;
    return verdict("fock.central_vacuum", res, 0.0);
  });
  run.add([&] {
    const auto v = bogoliubov_vacuum(w, mu);
    double res = 0.0;
    for (int c = 1; c <= colors; ++c)
      for (int k = -N; k <= N; ++k) {
        if (Rational(k) < mu) res = std::max(res, apply_mode(ModeOperator::psi(c, k), v).max_abs());
        if (Rational(k) <= -mu) res = std::max(res, apply_mode(ModeOperator::psibar(c, k), v).max_abs());
      }
    const auto back = bogoliubov_return(w, mu, v);
    res = std::max(res, std::abs(std::abs(back.amplitude(FockState{})) - 1.0));
    res = std::max(res, (back - back.amplitude(FockState{}) * FockVector::vacuum(w)).max_abs());
    return verdict("fock.bogoliubov", res, 0.0);
  });
  run.add([&] {
    double res = 0.0;
    for (int i = 1; i <= colors; ++i)
      for (int j = 1; j <= colors; ++j)
        for (int n = -sweep; n <= sweep; ++n) res = std::max(res, cut_shift_check(i, j, n, w, mu, grade));
    // n_{λμ} from the vacuum expectation against floor(μ) - floor(λ)
    const auto vac = FockVector::vacuum(w);
    const cd shift = (sigma(1, 1, 0, w, mu) - sigma(1, 1, 0, w, lam)).apply(vac).amplitude(FockState{});
    const auto expect = static_cast<double>(floor(mu) - floor(lam));
    res = std::max(res, std::abs(shift + expect));
    res = std::max(res, std::abs(cut_count(lam, mu) - expect));
    d["n_lambda_mu"] = cut_count(lam, mu);
    return verdict("fock.cut_shift", res, 0.0);
  });
  run.add([&] {
    std::vector<LieElement> ks = {LieElement{{{1.0, 1, 1, 0}}}};
    if (colors >= 2) {
      ks.push_back(LieElement{{{1.0, 1, 1, 0}, {-1.0, 2, 2, 0}}});
      ks.push_back(LieElement{{{1.0, 1, 1, 0}, {0.5, 1, 2, 1}, {-0.5, 2, 1, -1}}});
    } else {
      ks.push_back(LieElement{{{0.5, 1, 1, 1}, {-0.5, 1, 1, -1}}});
      ks.push_back(LieElement{{{1.0, 1, 1, 0}, {cd(0.0, 0.5), 1, 1, 1}, {cd(0.0, 0.5), 1, 1, -1}}});
    }
    double res = 0.0;
    for (const auto& k : ks) res = std::max(res, projective_equality_check(k, t, w, mu, grade));
    return verdict("fock.projective_equality", res, 1e-10);
  });
}

// tr(ρ(T_a)²) / tr(T_a²) summed over the basis
double trace_dynkin(const Representation& rho) {
  double num = 0.0, den = 0.0;
  for (std::size_t a = 0; a < rho.images().size(); ++a) {
    num += (rho.images()[a] * rho.images()[a]).trace().real();
    den += (rho.source().basis()[a] * rho.source().basis()[a]).trace().real();
  }
  return num / den;
}

void run_caloron(const json& p, std::int64_t, Runner& run) {
  PresetSpec spec;
  spec.name = p.at("preset").get<std::string>();
  spec.n = p.at("n").get<int>();
  spec.grid = Grid(p.at("P").get<int>(), p.at("M").get<int>(), 3);
  spec.amplitude = p.at("amplitude").get<double>();
  spec.higgs = p.at("higgs").get<double>();
  const double min_order = p.at("min_order").get<double>();
  json& d = run.data("caloron");

  run.add([&] {
    const auto r = ms_identity_check(spec);
    d["ms_residual_coarse"] = r.residual_coarse;
    d["ms_residual_fine"] = r.residual_fine;
    d["ms_scale"] = r.scale;
    if (std::isnan(r.order)) {
      // both sides at roundoff: nothing to converge
      d["ms_order"] = nullptr;
      return verdict("caloron.ms_identity", r.residual_fine, 1e-12 * std::max(1.0, r.scale));
    }
    d["ms_order"] = r.order;
    return verdict("caloron.ms_identity", r.order, min_order, ">=");
  });

  const LatticeConnection c = make_preset(spec);
  const LoopHiggsPair pair = to_caloron(c);
  for (const auto& name : p.at("reps")) {
    const auto rep = Representation::named(name.get<std::string>(), spec.n);
    run.add([&] {
      const auto r = rho_scaling_check(pair, rep);
      d["iota"][rep.name()] = to_string(r.iota);
      return verdict("caloron.rho_scaling." + rep.name(), r.relative(), 1e-8);
    });
  }
  const std::vector<std::tuple<std::string, int, std::string, int>> dynkin_cases = {
      {"su2-fundamental", 2, "fundamental", 1}, {"su3-fundamental", 3, "fundamental", 1},
      {"su4-fundamental", 4, "fundamental", 1}, {"su2-adjoint", 2, "adjoint", 4},
      {"su2-trivial", 2, "trivial", 0},
  };
  run.add([&] {
    double res = 0.0;
    for (const auto& [label, n, name, expect] : dynkin_cases) {
      const auto rep = Representation::named(name, n);
      const double lib = to_double(rep.dynkin());
      const double oracle = trace_dynkin(rep);
      d["dynkin"][label] = lib;
      res = std::max({res, std::abs(lib - expect), std::abs(oracle - expect)});
    }
    return verdict("caloron.dynkin", res, 1e-12);
  });

  const auto fund = Representation::fundamental(spec.n);
  const GridForm fund_index = index_curvature(c, fund);
  run.add([&] {
    const GridForm pont = pontryagin_form(c);
    GridForm diff = fund_index;
    diff -= pont;
    const double scale = std::max(pont.max_abs(), 1e-300);
    d["index_scale"] = pont.max_abs();
    return verdict("caloron.index_fundamental", diff.max_abs() / scale, 1e-12);
  });
  run.add([&] {
    const auto adj = Representation::adjoint(spec.n);
    GridForm diff = index_curvature(c, adj);
    GridForm scaled = to_double(adj.dynkin()) * fund_index;
    diff -= scaled;
    return verdict("caloron.index_adjoint", diff.max_abs() / std::max(scaled.max_abs(), 1e-300), 1e-8);
  });
}

LoopWord word_of(const json& v) {
  LoopWord w;
  for (const auto& l : v) w.letters.emplace_back(l[0].get<int>(), l[1].get<int>());
  return w;
}

ModuliFamily family_of(const json& v) {
  ModuliFamily f;
  for (int k = 0; k < 3; ++k) f.windings[k] = v[k].get<int>();
  return f;
}

void run_moduli(const json& p, std::int64_t seed, Runner& run) {
  const int conj = p.at("conjugations").get<int>();
  const int steps = p.at("flow_steps").get<int>();
  const int window = p.at("window").get<int>();
  const ModuliFamily family = family_of(p.at("windings"));
  const auto r = genus2_su2_example();
  json& d = run.data("moduli");
  const double base = relation_check(r);
  const auto verdict0 = irreducibility_check(r);

  run.add([&] {
    d["relation_residual"] = base;
    return verdict("moduli.relation", base, 1e-12);
  });
  run.add([&] {
    d["commutant_dimension"] = verdict0.commutant_dimension;
    auto rec = verdict("moduli.irreducible", std::abs(verdict0.commutant_dimension - 1), 0.0);
    if (verdict0.indeterminate) rec.status = "indeterminate";
    return rec;
  });
  run.add([&] {
    double res = 0.0;
    int changed = 0;
    for (int k = 1; k <= conj; ++k) {
      const auto c = conjugate(r, random_special_unitary(2, static_cast<unsigned long long>(seed) * 1000 + k));
      res = std::max(res, std::abs(relation_check(c) - base));
      const auto v = irreducibility_check(c);
      if (v.irreducible != verdict0.irreducible || v.commutant_dimension != verdict0.commutant_dimension ||
          v.indeterminate)
        ++changed;
    }
    d["conjugation_verdict_changes"] = changed;
    return verdict("moduli.conjugation_invariance", std::max(res, static_cast<double>(changed)), 1e-12);
  });
  const SpectralCut cut{Rational(1, 3)};
  run.add([&] {
    const int flow = spectral_flow(u1_winding_loop(1, steps), cut, window);
    d["flow_u1_winding"] = flow;
    return verdict("moduli.flow_u1_winding", std::abs(flow - 1), 0.0);
  });
  run.add([&] {
    // A₂ along x₁ is conjugate to diag(e^{2πiwx}, e^{-2πiwx}): closed-form flow 0
    int worst = 0;
    for (int axis = 0; axis < 3; ++axis) {
      const int flow = spectral_flow(family.holonomy_loop({{{3, 1}}}, axis, steps), cut, window);
      worst = std::max(worst, std::abs(flow));
      d["flow_su2_balanced"].push_back(flow);
    }
    return verdict("moduli.flow_su2_balanced", worst, 0.0);
  });
  run.add([&] {
    const auto a = u1_winding_loop(1, steps), b = u1_winding_loop(-2, 2 * steps);
    const int fa = spectral_flow(a, cut, window), fb = spectral_flow(b, cut, window);
    const int fab = spectral_flow(concatenate(a, b), cut, window);
    return verdict("moduli.flow_additivity", std::abs(fab - fa - fb) + std::abs(fb + 2), 0.0);
  });
}

void run_pairing(const json& p, std::int64_t, Runner& run) {
  const ModuliFamily family = family_of(p.at("windings"));
  const LoopWord gamma = word_of(p.at("gamma"));
  const auto rep = Representation::named(p.at("rep").get<std::string>(), 2);
  const Grid grid(p.at("P").get<int>(), p.at("M").get<int>(), 3);
  const double amp = p.at("amplitude").get<double>();
  json& d = run.data("pairing");

  run.add([&] {
    const auto fund = pontryagin_pairing(family, gamma, Representation::fundamental(2), grid, amp);
    const auto r = pontryagin_pairing(family, gamma, rep, grid, amp);
    const double iota = to_double(rep.dynkin());
    GridForm scaled = iota * fund.density;
    GridForm diff = r.density;
    diff -= scaled;
    d["iota"] = to_string(rep.dynkin());
    d["value_fundamental"] = fund.value;
    d["value_rep"] = r.value;
    d["density_max_fundamental"] = fund.density_max;
    const double scale = std::max(scaled.max_abs(), 1e-300);
    return verdict("pairing.rho_scaling", diff.max_abs() / scale, 1e-6);
  });
  run.add([&] {
    const auto z = pontryagin_pairing(ModuliFamily{{0, 0, 0}}, gamma, rep, grid, amp);
    return verdict("pairing.constant_family", std::max(std::abs(z.value), z.density_max), 1e-12);
  });
  run.add([&] {
    const auto z = pontryagin_pairing(family, gamma, rep, grid, amp, false);
    d["value_theta_independent"] = z.value;
    return verdict("pairing.theta_independent", std::abs(z.value), 1e-12);
  });
}

using RunFn = void (*)(const json&, std::int64_t, Runner&);

const std::map<std::string, RunFn>& runners() {
  static const std::map<std::string, RunFn> m = {
      {"spectrum", run_spectrum}, {"cover", run_cover},     {"cocycle", run_cocycle}, {"fock", run_fock},
      {"caloron", run_caloron},   {"moduli", run_moduli}, {"pairing", run_pairing},
  };
  return m;
}

json defaults_of(const std::string& command) {
  json out = json::object();
  for (const auto& p : tables().at(command)) out[p.key] = p.def;
  return out;
}

// output_path is left out so a report does not depend on where it is written
json scenario_json(const Scenario& s) { return {{"command", s.command}, {"params", s.params}, {"seed", s.seed}}; }

std::string hex_sha256(const std::string& text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
  return os.str();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum", "cover", "cocycle", "fock",
                                                 "caloron",  "moduli", "pairing", "all"};
  return names;
}

std::string version() { return GERBE_VERSION; }

json schema() {
  json out;
  out["top_level"] = {
      {"command", {{"type", "string"}, {"enum", command_names()}, {"required", true}}},
      {"params", {{"type", "object"}, {"default", json::object()}}},
      {"seed", {{"type", "int"}, {"default", 0}, {"min", 0}}},
      {"output_path", {{"type", "string"}, {"default", ""}}},
  };
  for (const auto& name : command_names()) {
    json params = json::object();
    for (const auto& p : tables().at(name)) {
      json e = {{"type", p.type}, {"default", p.def}, {"doc", p.doc}};
      if (std::isfinite(p.lo)) e["min"] = p.lo;
      if (std::isfinite(p.hi)) e["max"] = p.hi;
      params[p.key] = e;
    }
    out["commands"][name] = {{"params", params}};
  }
  out["version"] = version();
  return out;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) bad("<document>", "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "command" && key != "params" && key != "seed" && key != "output_path") bad(key, "unknown key");
  }
  if (!doc.contains("command")) bad("command", "missing");
  if (!doc.at("command").is_string()) bad("command", "expected a string");
  Scenario s;
  s.command = doc.at("command").get<std::string>();
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), s.command) == names.end()) bad("command", "unknown command " + s.command);
  if (doc.contains("seed")) {
    if (!is_int(doc.at("seed")) || doc.at("seed").get<std::int64_t>() < 0) bad("seed", "expected a nonnegative integer");
    s.seed = doc.at("seed").get<std::int64_t>();
  }
  if (doc.contains("output_path")) {
    if (!doc.at("output_path").is_string()) bad("output_path", "expected a string");
    s.output_path = doc.at("output_path").get<std::string>();
  }
  s.params = defaults_of(s.command);
  if (doc.contains("params")) {
    const auto& given = doc.at("params");
    if (!given.is_object()) bad("params", "expected an object");
    const auto& table = tables().at(s.command);
    for (const auto& [key, value] : given.items()) {
      auto it = std::find_if(table.begin(), table.end(), [&](const Param& p) { return p.key == key; });
      if (it == table.end()) bad("params." + key, "unknown key for command " + s.command);
      check_value("params." + key, value, *it);
      s.params[key] = value;
    }
  }
  cross_validate(s.command, s.params);
  return s;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("<document>: ") + e.what());
  }
  return scenario_from_json(doc);
}

Scenario default_scenario(const std::string& command) { return scenario_from_json(json{{"command", command}}); }

std::string config_hash(const Scenario& s) { return hex_sha256(scenario_json(s).dump()); }

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == "pass"; });
}

std::string Report::serialize(bool timings) const {
  json j;
  j["tool"] = "gerbetool";
  j["version"] = version();
  j["scenario"] = scenario_json(scenario);
  j["config_hash"] = config_hash(scenario);
  j["status"] = passed() ? "pass" : "fail";
  j["data"] = data;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    json e = {{"name", c.name},
              {"status", c.status},
              {"residual", c.residual},
              {"tolerance", c.tolerance},
              {"comparison", c.comparison}};
    if (timings) e["runtime_ms"] = c.runtime_ms;
    j["checks"].push_back(e);
  }
  if (timings) j["runtime_ms"] = runtime_ms;
  return j.dump(2) + "\n";
}

Report run(const Scenario& s) {
  Report report;
  report.scenario = s;
  Runner runner(report);
  const auto t0 = Clock::now();
  try {
    if (s.command == "all") {
      for (const auto& name : command_names()) {
        if (name == "all") continue;
        runners().at(name)(defaults_of(name), s.seed, runner);
      }
    } else {
      runners().at(s.command)(s.params, s.seed, runner);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("params", std::string("params: ") + e.what());
  }
  report.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return report;
}

}  // namespace gerbe::cli
