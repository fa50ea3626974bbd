#include "cli/app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/commands.hpp"

#ifndef GPD_VERSION
#define GPD_VERSION "unknown"
#endif

namespace gpd::cli {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("output.path", 0, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ConfigError("output.path", 0, "write to '" + path + "' failed");
}

int execute(Mode mode, const Options& opt, std::ostream& out, std::ostream& err) {
  const RunConfig config = load_config(opt.config);
  validate_for(config, mode);

  const std::string path = opt.out.empty() ? config.output.path : opt.out;
  std::string format = opt.format.empty() ? config.output.format : opt.format;
  if (mode == Mode::Oracle && opt.format.empty()) format = "json";

  const Metadata meta{GPD_VERSION, to_string(mode), to_json(config)};
  std::ostringstream text;
  int code = exit_ok;

  if (mode == Mode::Oracle) {
    const OracleReport report = cmd_oracle(config);
    if (format == "json") {
      nlohmann::ordered_json j;
      j["version"] = meta.version;
      j["command"] = meta.command;
      j["config"] = meta.config;
      j["report"] = report.to_json();
      text << j.dump(2) << "\n";
    } else {
      write_csv(text, report.to_table(), meta);
    }
    if (!report.passed()) {
      for (const auto& c : report.checks)
        if (!c.passed)
          err << "gpd: oracle check '" << c.name << "' failed: error " << format_number(c.error)
              << " >= tolerance " << format_number(c.tolerance) << "\n";
      code = exit_oracle_failure;
    }
  } else {
    Table table;
    switch (mode) {
      case Mode::Exact: table = cmd_exact(config); break;
      case Mode::Adiabatic: table = cmd_adiabatic(config); break;
      case Mode::Nonadiabatic: table = cmd_nonadiabatic(config); break;
      case Mode::Density: table = cmd_density(config); break;
      case Mode::Fig2: table = cmd_fig2(config); break;
      case Mode::Fig3: table = cmd_fig3(config); break;
      case Mode::Oracle: break;
    }
    if (format == "json")
      write_json(text, table, meta);
    else
      write_csv(text, table, meta);
    for (const auto& w : table.warnings) err << "gpd: warning: " << w << "\n";
  }
  emit(text.str(), path, out);
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric phase of a dissipative driven two-level system", "gpd"};
  app.set_version_flag("--version", GPD_VERSION);
  app.require_subcommand(1);

  Options opt;
  Mode selected = Mode::Exact;
  const std::vector<std::pair<Mode, const char*>> commands{
      {Mode::Exact, "Dissipationless energies and geometric phase"},
      {Mode::Adiabatic, "Adiabatic-limit phase decomposition and dephasing"},
      {Mode::Nonadiabatic, "Nonadiabatic geometric phases, widths and dephasing"},
      {Mode::Density, "Reduced density matrix over a time grid"},
      {Mode::Oracle, "Numerical cross-checks against the closed forms"},
      {Mode::Fig2, "Adiabatic Berry phase versus theta for several cutoffs"},
      {Mode::Fig3, "Nonadiabatic geometric phase versus theta for several rotation rates"},
  };
  for (const auto& [mode, help] : commands) {
    auto* sub = app.add_subcommand(to_string(mode), help);
    sub->add_option("--config", opt.config, "JSON run configuration")->required();
    sub->add_option("--out", opt.out, "Output file (default: config output.path or stdout)");
    sub->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->callback([&selected, m = mode] { selected = m; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_ok : exit_validation;
  }

  try {
    return execute(selected, opt, out, err);
  } catch (const ConfigError& e) {
    err << "gpd: config error: " << e.what() << "\n";
    return exit_validation;
  } catch (const SingularityError& e) {
    err << "gpd: numerical singularity: " << e.what() << "\n";
    return exit_singularity;
  } catch (const CutoffResonanceError& e) {
    err << "gpd: numerical singularity: " << e.what() << "\n";
    return exit_singularity;
  } catch (const std::invalid_argument& e) {
    err << "gpd: invalid input: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::domain_error& e) {
    err << "gpd: invalid input: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    err << "gpd: error: " << e.what() << "\n";
    return exit_validation;
  }
}

}  // namespace gpd::cli
