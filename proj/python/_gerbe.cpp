#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gerbe/caloron.hpp"
#include "gerbe/cli.hpp"
#include "gerbe/detline.hpp"
#include "gerbe/errors.hpp"
#include "gerbe/fock.hpp"
#include "gerbe/moduli.hpp"
#include "gerbe/spectral.hpp"

namespace py = pybind11;
using namespace gerbe;

namespace {

// Accepts int, str ("p/q", "0.25") or fractions.Fraction.
Rational to_rational(const py::handle& o) {
  if (py::isinstance<py::int_>(o)) return Rational(o.cast<std::int64_t>());
  if (py::isinstance<py::str>(o)) return parse_rational(o.cast<std::string>());
  if (py::hasattr(o, "numerator") && py::hasattr(o, "denominator"))
    return Rational(o.attr("numerator").cast<std::int64_t>(), o.attr("denominator").cast<std::int64_t>());
  throw py::type_error("expected int, str or Fraction for a rational value");
}

py::object to_fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.numerator(), r.denominator());
}

SpectralCut cut_of(const py::handle& o) { return SpectralCut{to_rational(o)}; }

std::vector<Holonomy> path_of(const std::vector<Eigen::MatrixXcd>& mats, bool special) {
  std::vector<Holonomy> out;
  out.reserve(mats.size());
  for (const auto& m : mats) out.push_back(Holonomy::make(m, special));
  return out;
}

PresetSpec preset_of(const std::string& name, int n, int P, int M) {
  PresetSpec s;
  s.name = name;
  s.n = n;
  s.grid = Grid(P, M, 3);
  return s;
}

py::dict irreducibility_dict(const IrreducibilityResult& v) {
  py::dict d;
  d["irreducible"] = v.irreducible;
  d["commutant_dimension"] = v.commutant_dimension;
  d["indeterminate"] = v.indeterminate;
  d["smallest_nonnull"] = v.smallest_nonnull;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gerbe, m) {
  m.doc() = "Spectral covers, determinant lines, fermionic Fock space and caloron curvature";

  static py::exception<Error> base(m, "GerbeError");
  static py::exception<ValidationError> validation(m, "ValidationError", base.ptr());
  static py::exception<RangeError> range(m, "RangeError", base.ptr());
  static py::exception<ArgumentError> argument(m, "ArgumentError", base.ptr());
  static py::exception<CoverError> cover(m, "CoverError", base.ptr());
  static py::exception<CompositionError> composition(m, "CompositionError", base.ptr());
  static py::exception<ResourceError> resource(m, "ResourceError", base.ptr());
  static py::exception<ResolutionError> resolution(m, "ResolutionError", base.ptr());
  static py::exception<PrecisionError> precision(m, "PrecisionError", base.ptr());
  static py::exception<ConsistencyError> consistency(m, "ConsistencyError", base.ptr());
  static py::exception<DimensionError> dimension(m, "DimensionError", base.ptr());
  static py::exception<CapabilityError> capability(m, "CapabilityError", base.ptr());
  static py::exception<cli::ConfigError> config(m, "ConfigError", base.ptr());
  // most derived first
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const cli::ConfigError& e) {
      PyErr_SetString(config.ptr(), e.what());
    } catch (const ValidationError& e) {
      PyErr_SetString(validation.ptr(), e.what());
    } catch (const RangeError& e) {
      PyErr_SetString(range.ptr(), e.what());
    } catch (const ArgumentError& e) {
      PyErr_SetString(argument.ptr(), e.what());
    } catch (const CoverError& e) {
      PyErr_SetString(cover.ptr(), e.what());
    } catch (const CompositionError& e) {
      PyErr_SetString(composition.ptr(), e.what());
    } catch (const ResourceError& e) {
      PyErr_SetString(resource.ptr(), e.what());
    } catch (const ResolutionError& e) {
      PyErr_SetString(resolution.ptr(), e.what());
    } catch (const PrecisionError& e) {
      PyErr_SetString(precision.ptr(), e.what());
    } catch (const ConsistencyError& e) {
      PyErr_SetString(consistency.ptr(), e.what());
    } catch (const DimensionError& e) {
      PyErr_SetString(dimension.ptr(), e.what());
    } catch (const CapabilityError& e) {
      PyErr_SetString(capability.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  // spectral
  m.def(
      "dirac_spectrum",
      [](const Eigen::MatrixXcd& U, int window, bool special) {
        std::vector<std::tuple<int, int, double>> out;
        const auto s = dirac_spectrum(Holonomy::make(U, special), window);
        for (const auto& e : s.modes())
          out.emplace_back(e.color, e.mode, e.eigenvalue);
        return out;
      },
      py::arg("holonomy"), py::arg("window"), py::arg("special") = false,
      "(color, mode, eigenvalue) triples in canonical order.");
  m.def(
      "in_cover",
      [](const Eigen::MatrixXcd& U, int window, const py::object& cut, bool special) {
        return in_cover(dirac_spectrum(Holonomy::make(U, special), window), cut_of(cut));
      },
      py::arg("holonomy"), py::arg("window"), py::arg("cut"), py::arg("special") = false);
  m.def(
      "spectral_flow",
      [](const std::vector<Eigen::MatrixXcd>& path, const py::object& cut, int window, bool special) {
        const auto hs = path_of(path, special);
        return spectral_flow(hs, cut_of(cut), window);
      },
      py::arg("path"), py::arg("cut"), py::arg("window"), py::arg("special") = false);

  // determinant lines
  m.def(
      "delta_triviality",
      [](const Eigen::MatrixXcd& U, int window, const py::object& lo, const py::object& mid, const py::object& hi,
         bool special) {
        const auto s = dirac_spectrum(Holonomy::make(U, special), window);
        const auto a = cut_of(lo), b = cut_of(mid), c = cut_of(hi);
        return delta_triviality({det_line(s, a, b), det_line(s, b, c), det_line(s, a, c)});
      },
      py::arg("holonomy"), py::arg("window"), py::arg("lo"), py::arg("mid"), py::arg("hi"),
      py::arg("special") = false);
  m.def(
      "band_size",
      [](const Eigen::MatrixXcd& U, int window, const py::object& lo, const py::object& hi, bool special) {
        return band(dirac_spectrum(Holonomy::make(U, special), window), cut_of(lo), cut_of(hi)).size();
      },
      py::arg("holonomy"), py::arg("window"), py::arg("lo"), py::arg("hi"), py::arg("special") = false);

  // fock
  m.def("cut_count", [](const py::object& lam, const py::object& mu) { return cut_count(to_rational(lam), to_rational(mu)); },
        py::arg("lam"), py::arg("mu"));
  m.def("central_term", &central_term, py::arg("i"), py::arg("j"), py::arg("k"), py::arg("l"), py::arg("m"),
        py::arg("n"));
  m.def(
      "commutator_check",
      [](int i, int j, int k, int l, int mm, int n, int colors, int N, const py::object& lam, int max_grade) {
        return commutator_check(i, j, k, l, mm, n, FockWindow(colors, N, to_rational(lam)), max_grade);
      },
      py::arg("i"), py::arg("j"), py::arg("k"), py::arg("l"), py::arg("m"), py::arg("n"), py::arg("colors"),
      py::arg("N"), py::arg("lam") = "1/2", py::arg("max_grade") = 2);
  m.def(
      "vacuum_pairing",
      [](int i, int j, int mm, int colors, int N, const py::object& lam) {
        const FockWindow w(colors, N, to_rational(lam));
        return commutator(sigma(i, j, mm, w), sigma(j, i, -mm, w)).apply(FockVector::vacuum(w)).amplitude(FockState{});
      },
      py::arg("i"), py::arg("j"), py::arg("m"), py::arg("colors"), py::arg("N"), py::arg("lam") = "1/2",
      "<0|[sigma(e^ij_m), sigma(e^ji_-m)]|0>.");
  m.def(
      "cut_shift_check",
      [](int i, int j, int n, int colors, int N, const py::object& lam, const py::object& mu) {
        return cut_shift_check(i, j, n, FockWindow(colors, N, to_rational(lam)), to_rational(mu));
      },
      py::arg("i"), py::arg("j"), py::arg("n"), py::arg("colors"), py::arg("N"), py::arg("lam"), py::arg("mu"));
  m.def(
      "projective_equality_check",
      [](const std::vector<std::tuple<std::complex<double>, int, int, int>>& terms, double t, int colors, int N,
         const py::object& lam, const py::object& mu) {
        LieElement k;
        for (const auto& [c, i, j, n] : terms) k.terms.push_back({c, i, j, n});
        return projective_equality_check(k, t, FockWindow(colors, N, to_rational(lam)), to_rational(mu));
      },
      py::arg("terms"), py::arg("t"), py::arg("colors"), py::arg("N"), py::arg("lam"), py::arg("mu"),
      "terms are (coeff, i, j, n) for coeff * e^ij_n.");

  // caloron
  m.def("preset_names", &preset_names);
  m.def(
      "dynkin_index", [](int n, const std::vector<int>& partition) { return to_fraction(dynkin_index(n, partition)); },
      py::arg("n"), py::arg("partition"));
  m.def(
      "ms_identity",
      [](const std::string& preset, int n, int P, int M) {
        const auto r = ms_identity_check(preset_of(preset, n, P, M));
        py::dict d;
        d["residual_coarse"] = r.residual_coarse;
        d["residual_fine"] = r.residual_fine;
        d["order"] = r.order;
        d["scale"] = r.scale;
        return d;
      },
      py::arg("preset"), py::arg("n") = 2, py::arg("P") = 16, py::arg("M") = 16,
      "Residuals at M and 2M and the measured order.");
  m.def(
      "rho_scaling",
      [](const std::string& preset, const std::string& rep, int n, int P, int M) {
        const auto r = rho_scaling_check(to_caloron(make_preset(preset_of(preset, n, P, M))),
                                         Representation::named(rep, n));
        py::dict d;
        d["iota"] = to_fraction(r.iota);
        d["b_residual"] = r.b_residual;
        d["h_residual"] = r.h_residual;
        d["relative"] = r.relative();
        return d;
      },
      py::arg("preset"), py::arg("rep"), py::arg("n") = 2, py::arg("P") = 16, py::arg("M") = 8);
  m.def(
      "index_integral",
      [](const std::string& preset, const std::string& rep, int n, int P, int M) {
        const auto c = make_preset(preset_of(preset, n, P, M));
        return index_curvature(c, Representation::named(rep, n)).integrals().at(0);
      },
      py::arg("preset"), py::arg("rep"), py::arg("n") = 2, py::arg("P") = 16, py::arg("M") = 8);

  // moduli
  m.def(
      "relation_check",
      [](int genus, int n, int z_power, const std::vector<Eigen::MatrixXcd>& gens) {
        return relation_check(SurfaceGroupRep::make(genus, n, z_power, gens));
      },
      py::arg("genus"), py::arg("n"), py::arg("z_power"), py::arg("generators"));
  m.def(
      "irreducibility",
      [](int genus, int n, int z_power, const std::vector<Eigen::MatrixXcd>& gens) {
        return irreducibility_dict(irreducibility_check(SurfaceGroupRep::make(genus, n, z_power, gens)));
      },
      py::arg("genus"), py::arg("n"), py::arg("z_power"), py::arg("generators"));
  m.def("genus2_example", []() { return genus2_su2_example().generators(); },
        "Generators A1, B1, A2, B2 of the genus-2 SU(2) point with z = -1.");
  m.def("random_special_unitary", &random_special_unitary, py::arg("n"), py::arg("seed"));
  m.def(
      "family_flow",
      [](std::array<int, 3> windings, std::vector<std::pair<int, int>> word, int axis, const py::object& cut,
         int window, int steps) {
        const auto loop = ModuliFamily{windings}.holonomy_loop(LoopWord{std::move(word)}, axis, steps);
        return spectral_flow(loop, cut_of(cut), window);
      },
      py::arg("windings"), py::arg("word"), py::arg("axis"), py::arg("cut") = "1/3", py::arg("window") = 3,
      py::arg("steps") = 64);
  m.def(
      "u1_winding_flow",
      [](int winding, const py::object& cut, int window, int steps) {
        return spectral_flow(u1_winding_loop(winding, steps), cut_of(cut), window);
      },
      py::arg("winding"), py::arg("cut") = "1/3", py::arg("window") = 3, py::arg("steps") = 64);
  m.def(
      "pairing",
      [](std::array<int, 3> windings, std::vector<std::pair<int, int>> word, const std::string& rep, int P, int M) {
        const auto r = pontryagin_pairing(ModuliFamily{windings}, LoopWord{std::move(word)},
                                          Representation::named(rep, 2), Grid(P, M, 3));
        return py::make_tuple(r.value, r.density_max);
      },
      py::arg("windings"), py::arg("word"), py::arg("rep") = "fundamental", py::arg("P") = 16, py::arg("M") = 8,
      "(integral, density max) of the model pairing.");

  // scenarios
  m.def("command_names", &cli::command_names);
  m.def("schema", []() { return cli::schema().dump(); }, "Schema as JSON text.");
  m.def(
      "run_scenario",
      [](const std::string& text, bool timings) {
        const auto report = cli::run(cli::parse_scenario(text));
        return py::make_tuple(report.passed(), report.serialize(timings));
      },
      py::arg("config"), py::arg("timings") = false, "(passed, report JSON text) for a JSON scenario.");
  m.def("config_hash", [](const std::string& text) { return cli::config_hash(cli::parse_scenario(text)); },
        py::arg("config"));
  m.attr("__version__") = cli::version();
}
