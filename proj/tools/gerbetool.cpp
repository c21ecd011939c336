#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gerbe/cli.hpp"

namespace {

namespace gc = gerbe::cli;

int config_error(const std::string& message) {
  std::cerr << "config error: " << message << "\n";
  return 2;
}

int run_command(const std::string& command, const std::string& config, const std::string& out, long long seed,
                bool seed_given, bool timings) {
  gc::Scenario s;
  if (config.empty()) {
    s = gc::default_scenario(command);
  } else {
    std::ifstream in(config);
    if (!in) return config_error("--config: cannot read " + config);
    std::stringstream buf;
    buf << in.rdbuf();
    s = gc::parse_scenario(buf.str());
    if (s.command != command) {
      return config_error("command: file names '" + s.command + "' but the subcommand is '" + command + "'");
    }
  }
  if (seed_given) {
    if (seed < 0) return config_error("--seed: expected a nonnegative integer");
    s.seed = seed;
  }
  if (!out.empty()) s.output_path = out;
  const gc::Report report = gc::run(s);
  const std::string text = report.serialize(timings);
  if (s.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(s.output_path, std::ios::binary);
    if (!f) return config_error("output_path: cannot write " + s.output_path);
    f << text;
    std::cerr << report.checks.size() << " checks, " << (report.passed() ? "pass" : "fail") << " -> " << s.output_path
              << "\n";
  }
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for index and caloron bundle gerbes", "gerbetool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gc::version());

  std::string config, out;
  long long seed = 0;
  bool timings = false;
  std::string chosen;
  for (const auto& name : gc::command_names()) {
    const std::string help = name == "all" ? "run every command at its defaults" : "run the " + name + " checks";
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "scenario file (JSON)");
    sub->add_option("--out", out, "report path; stdout when omitted");
    sub->add_option("--seed", seed, "override the scenario seed");
    sub->add_flag("--timings", timings, "include runtimes (the report is then not byte-stable)");
    sub->callback([&chosen, name] { chosen = name; });
  }
  app.add_subcommand("schema", "print the configuration schema")->callback([&chosen] { chosen = "schema"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  if (chosen == "schema") {
    std::cout << gc::schema().dump(2) << "\n";
    return 0;
  }
  try {
    bool seed_given = false;
    for (auto* sub : app.get_subcommands()) seed_given = seed_given || sub->count("--seed") > 0;
    return run_command(chosen, config, out, seed, seed_given, timings);
  } catch (const gc::ConfigError& e) {
    return config_error(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
