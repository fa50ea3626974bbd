#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace gpd::cli {

using json = nlohmann::json;

ConfigError::ConfigError(std::string path, int line, std::string message, std::string file)
    : std::runtime_error([&] {
        std::ostringstream os;
        if (!file.empty()) os << file << (line > 0 ? ":" : ": ");
        if (line > 0) os << (file.empty() ? "line " : "") << line << ": ";
        if (!path.empty()) os << path << ": ";
        os << message;
        return os.str();
      }()),
      path_(std::move(path)),
      line_(line),
      message_(std::move(message)) {}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Exact: return "exact";
    case Mode::Adiabatic: return "adiabatic";
    case Mode::Nonadiabatic: return "nonadiabatic";
    case Mode::Density: return "density";
    case Mode::Oracle: return "oracle";
    case Mode::Fig2: return "fig2";
    case Mode::Fig3: return "fig3";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& s) {
  for (Mode m : {Mode::Exact, Mode::Adiabatic, Mode::Nonadiabatic, Mode::Density, Mode::Oracle,
                 Mode::Fig2, Mode::Fig3})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

double FieldConfig::omega0_magnitude() const {
  if (omega0_over_B) return *omega0_over_B;
  if (period_s) return 1.0 / (*period_s * B_hz);  // (2 pi / T) / (2 pi B_hz)
  return 0.01;
}

FieldParams FieldConfig::params() const {
  return FieldParams::make(1.0, theta, rotation_sign * omega0_magnitude());
}

std::vector<double> SweepConfig::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    v[static_cast<std::size_t>(i)] =
        log_scale ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                  : min + f * (max - min);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

namespace {

// Maps every object key (as a dotted path, arrays as [i]) to the line it starts on.
// Only meaningful for syntactically valid documents.
std::map<std::string, int> key_lines(const std::string& text) {
  struct Frame {
    bool object;
    std::string path;
    int index = 0;
    bool expect_key = true;
    std::string last_key;
  };
  std::map<std::string, int> out;
  std::vector<Frame> stack;
  int line = 1;

  auto child_path = [&]() -> std::string {
    if (stack.empty()) return "";
    const Frame& f = stack.back();
    if (f.object) return f.path.empty() ? f.last_key : f.path + "." + f.last_key;
    return f.path + "[" + std::to_string(f.index) + "]";
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (c == '"') {
      std::string s;
      const int start_line = line;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          s += text[++i];
          continue;
        }
        if (text[i] == '\n') ++line;
        s += text[i];
      }
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().last_key = s;
        stack.back().expect_key = false;
        out.emplace(child_path(), start_line);
      }
    } else if (c == '{' || c == '[') {
      const std::string p = child_path();
      stack.push_back({c == '{', p, 0, true, {}});
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
    } else if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object)
          stack.back().expect_key = true;
        else
          ++stack.back().index;
      }
    }
  }
  return out;
}

class Reader {
 public:
  Reader(const json& root, std::map<std::string, int> lines)
      : root_(root), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    // Fall back to the closest enclosing key that has a known line.
    std::string p = path;
    while (true) {
      if (auto it = lines_.find(p); it != lines_.end()) throw ConfigError(path, it->second, msg);
      const auto cut = p.find_last_of(".[");
      if (cut == std::string::npos) break;
      p = p.substr(0, cut);
    }
    throw ConfigError(path, 0, msg);
  }

  static std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
  }

  const json* object(const json& parent, const std::string& base, const std::string& key,
                     const std::set<std::string>& allowed) const {
    if (!parent.contains(key) || parent.at(key).is_null()) return nullptr;
    const json& j = parent.at(key);
    const std::string path = join(base, key);
    if (!j.is_object()) fail(path, "expected an object");
    check_keys(j, path, allowed);
    return &j;
  }

  void check_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : j.items())
      if (!allowed.contains(k)) fail(join(path, k), "unknown field");
  }

  void number(const json* obj, const std::string& base, const std::string& key, double& out,
              const std::function<const char*(double)>& check = {}) const {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const std::string path = join(base, key);
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    if (check) {
      if (const char* err = check(x)) {
        std::ostringstream os;
        os.precision(17);
        os << err << " (got " << x << ")";
        fail(path, os.str());
      }
    }
    out = x;
  }

  void optional_number(const json* obj, const std::string& base, const std::string& key,
                       std::optional<double>& out,
                       const std::function<const char*(double)>& check) const {
    if (obj == nullptr || !obj->contains(key) || obj->at(key).is_null()) return;
    double x = 0.0;
    number(obj, base, key, x, check);
    out = x;
  }

  void integer(const json* obj, const std::string& base, const std::string& key, int& out,
               int min_value) const {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const std::string path = join(base, key);
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const auto x = v.get<long long>();
    if (x < min_value) fail(path, "must be >= " + std::to_string(min_value) + " (got " +
                                      std::to_string(x) + ")");
    if (x > 1'000'000'000) fail(path, "too large");
    out = static_cast<int>(x);
  }

  void string(const json* obj, const std::string& base, const std::string& key, std::string& out,
              const std::set<std::string>& allowed) const {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const std::string path = join(base, key);
    if (!v.is_string()) fail(path, "expected a string");
    const auto s = v.get<std::string>();
    if (!allowed.empty() && !allowed.contains(s)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(path, "unknown value '" + s + "' (expected one of: " + list + ")");
    }
    out = s;
  }

  void number_list(const json* obj, const std::string& base, const std::string& key,
                   std::vector<double>& out, const char* (*check)(double)) const {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const std::string path = join(base, key);
    if (!v.is_array()) fail(path, "expected an array of numbers");
    if (v.empty()) fail(path, "must not be empty");
    std::vector<double> xs;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string ip = path + "[" + std::to_string(i) + "]";
      if (!v[i].is_number()) fail(ip, "expected a number");
      const double x = v[i].get<double>();
      if (!std::isfinite(x)) fail(ip, "must be finite");
      if (const char* err = check(x)) fail(ip, err);
      xs.push_back(x);
    }
    out = std::move(xs);
  }

  void complex(const json* obj, const std::string& base, const std::string& key, double& re,
               double& im) const {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const std::string path = join(base, key);
    if (v.is_number()) {
      re = v.get<double>();
      im = 0.0;
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      re = v[0].get<double>();
      im = v[1].get<double>();
    } else {
      fail(path, "expected a number or a [re, im] pair");
    }
    if (!std::isfinite(re) || !std::isfinite(im)) fail(path, "must be finite");
  }

  const json& root() const { return root_; }

 private:
  const json& root_;
  std::map<std::string, int> lines_;
};

const char* positive(double x) { return x > 0.0 ? nullptr : "must be > 0"; }
const char* non_negative(double x) { return x >= 0.0 ? nullptr : "must be >= 0"; }
const char* angle(double x) { return x >= 0.0 && x <= pi ? nullptr : "must lie in [0, pi]"; }

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ConfigError("", line, "column " + std::to_string(col) + ": " + what);
  }
  if (!root.is_object()) throw ConfigError("", 1, "top level must be a JSON object");

  const Reader r(root, key_lines(text));
  r.check_keys(root, "",
               {"mode", "field", "bath", "sweep", "output", "density", "fig2", "fig3", "oracle"});

  RunConfig c;
  if (root.contains("mode") && !root.at("mode").is_null()) {
    std::string m;
    r.string(&root, "", "mode", m,
             {"exact", "adiabatic", "nonadiabatic", "density", "oracle", "fig2", "fig3"});
    c.mode = parse_mode(m);
  }

  if (const json* f = r.object(root, "", "field",
                               {"B_hz", "theta", "omega0_over_B", "period_s", "rotation_sign"})) {
    r.number(f, "field", "B_hz", c.field.B_hz, positive);
    r.number(f, "field", "theta", c.field.theta, angle);
    r.optional_number(f, "field", "omega0_over_B", c.field.omega0_over_B, non_negative);
    r.optional_number(f, "field", "period_s", c.field.period_s, positive);
    if (c.field.omega0_over_B && c.field.period_s)
      r.fail("field.period_s", "give either omega0_over_B or period_s, not both");
    r.integer(f, "field", "rotation_sign", c.field.rotation_sign, -1);
    if (c.field.rotation_sign != 1 && c.field.rotation_sign != -1)
      r.fail("field.rotation_sign", "must be +1 or -1");
  }

  if (const json* b = r.object(root, "", "bath", {"kind", "eta", "omega_c_over_B"})) {
    std::string kind = to_string(c.bath.kind);
    r.string(b, "bath", "kind", kind, {"ohmic", "super_ohmic"});
    c.bath.kind = kind == "ohmic" ? SpectrumKind::Ohmic : SpectrumKind::SuperOhmic;
    r.number(b, "bath", "eta", c.bath.eta, non_negative);
    r.number(b, "bath", "omega_c_over_B", c.bath.omega_c_over_B, positive);
  }

  if (const json* s = r.object(root, "", "sweep", {"name", "min", "max", "count", "scale"})) {
    SweepConfig sw;
    if (!s->contains("name")) r.fail("sweep.name", "required");
    if (!s->contains("min")) r.fail("sweep.min", "required");
    if (!s->contains("max")) r.fail("sweep.max", "required");
    if (!s->contains("count")) r.fail("sweep.count", "required");
    r.string(s, "sweep", "name", sw.name, {"theta", "omega0_over_B", "eta", "omega_c_over_B"});
    r.number(s, "sweep", "min", sw.min);
    r.number(s, "sweep", "max", sw.max);
    r.integer(s, "sweep", "count", sw.count, 2);
    std::string scale = "linear";
    r.string(s, "sweep", "scale", scale, {"linear", "log"});
    sw.log_scale = scale == "log";
    if (!(sw.min < sw.max)) r.fail("sweep.max", "must be greater than sweep.min");
    if (sw.log_scale && !(sw.min > 0.0)) r.fail("sweep.min", "must be > 0 for a log sweep");
    if (sw.name == "theta" && (sw.min < 0.0 || sw.max > pi))
      r.fail("sweep", "theta range must lie in [0, pi]");
    if ((sw.name == "eta" || sw.name == "omega0_over_B") && sw.min < 0.0)
      r.fail("sweep.min", "must be >= 0");
    if (sw.name == "omega_c_over_B" && !(sw.min > 0.0)) r.fail("sweep.min", "must be > 0");
    c.sweep = sw;
  }

  if (const json* o = r.object(root, "", "output", {"path", "format"})) {
    r.string(o, "output", "path", c.output.path, {});
    r.string(o, "output", "format", c.output.format, {"csv", "json"});
  }

  if (const json* d = r.object(root, "", "density", {"a", "b", "t_max_over_tau", "count"})) {
    r.complex(d, "density", "a", c.density.a_re, c.density.a_im);
    r.complex(d, "density", "b", c.density.b_re, c.density.b_im);
    r.number(d, "density", "t_max_over_tau", c.density.t_max_over_tau, positive);
    r.integer(d, "density", "count", c.density.count, 2);
    const double n = c.density.a_re * c.density.a_re + c.density.a_im * c.density.a_im +
                     c.density.b_re * c.density.b_re + c.density.b_im * c.density.b_im;
    if (!(n > 0.0)) r.fail("density", "a and b must not both vanish");
  }

  if (const json* f2 = r.object(root, "", "fig2", {"omega_c_over_B", "theta_count"})) {
    r.number_list(f2, "fig2", "omega_c_over_B", c.fig2.omega_c_over_B, positive);
    r.integer(f2, "fig2", "theta_count", c.fig2.theta_count, 2);
  }

  if (const json* f3 = r.object(root, "", "fig3", {"omega0_over_B", "theta_count"})) {
    r.number_list(f3, "fig3", "omega0_over_B", c.fig3.omega0_over_B, positive);
    r.integer(f3, "fig3", "theta_count", c.fig3.theta_count, 2);
  }

  if (const json* o = r.object(
          root, "", "oracle",
          {"steps_per_period", "max_step", "ode_tolerance", "aa_tolerance", "theta",
           "omega0_over_B", "eta", "omega_c_over_B", "modes", "t_final", "dt", "fit_t_min",
           "width_tolerance", "shift_tolerance", "zero_coupling_tolerance"})) {
    auto& q = c.oracle;
    r.integer(o, "oracle", "steps_per_period", q.steps_per_period, 1);
    r.number(o, "oracle", "max_step", q.max_step, positive);
    r.number(o, "oracle", "ode_tolerance", q.ode_tolerance, positive);
    r.number(o, "oracle", "aa_tolerance", q.aa_tolerance, positive);
    r.number(o, "oracle", "theta", q.theta, angle);
    r.number(o, "oracle", "omega0_over_B", q.omega0_over_B, positive);
    r.number(o, "oracle", "eta", q.eta, non_negative);
    r.number(o, "oracle", "omega_c_over_B", q.omega_c_over_B, positive);
    r.integer(o, "oracle", "modes", q.modes, 1);
    r.number(o, "oracle", "t_final", q.t_final, positive);
    r.number(o, "oracle", "dt", q.dt, positive);
    r.number(o, "oracle", "fit_t_min", q.fit_t_min, non_negative);
    r.number(o, "oracle", "width_tolerance", q.width_tolerance, positive);
    r.number(o, "oracle", "shift_tolerance", q.shift_tolerance, positive);
    r.number(o, "oracle", "zero_coupling_tolerance", q.zero_coupling_tolerance, positive);
    if (!(q.fit_t_min < q.t_final)) r.fail("oracle.fit_t_min", "must be below oracle.t_final");
    if (q.t_final / q.dt > 1e8) r.fail("oracle.dt", "more than 1e8 steps requested");
  }

  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot open config file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.path(), e.line(), e.message(), path);
  }
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  if (c.mode) j["mode"] = to_string(*c.mode);

  auto& f = j["field"];
  f["B_hz"] = c.field.B_hz;
  f["theta"] = c.field.theta;
  if (c.field.omega0_over_B) f["omega0_over_B"] = *c.field.omega0_over_B;
  if (c.field.period_s) f["period_s"] = *c.field.period_s;
  f["rotation_sign"] = c.field.rotation_sign;

  j["bath"] = {{"kind", to_string(c.bath.kind)},
               {"eta", c.bath.eta},
               {"omega_c_over_B", c.bath.omega_c_over_B}};

  if (c.sweep) {
    j["sweep"] = {{"name", c.sweep->name},
                  {"min", c.sweep->min},
                  {"max", c.sweep->max},
                  {"count", c.sweep->count},
                  {"scale", c.sweep->log_scale ? "log" : "linear"}};
  }

  j["output"] = {{"path", c.output.path}, {"format", c.output.format}};

  j["density"] = {{"a", {c.density.a_re, c.density.a_im}},
                  {"b", {c.density.b_re, c.density.b_im}},
                  {"t_max_over_tau", c.density.t_max_over_tau},
                  {"count", c.density.count}};

  j["fig2"] = {{"omega_c_over_B", c.fig2.omega_c_over_B}, {"theta_count", c.fig2.theta_count}};
  j["fig3"] = {{"omega0_over_B", c.fig3.omega0_over_B}, {"theta_count", c.fig3.theta_count}};

  const auto& q = c.oracle;
  j["oracle"] = {{"steps_per_period", q.steps_per_period},
                 {"max_step", q.max_step},
                 {"ode_tolerance", q.ode_tolerance},
                 {"aa_tolerance", q.aa_tolerance},
                 {"theta", q.theta},
                 {"omega0_over_B", q.omega0_over_B},
                 {"eta", q.eta},
                 {"omega_c_over_B", q.omega_c_over_B},
                 {"modes", q.modes},
                 {"t_final", q.t_final},
                 {"dt", q.dt},
                 {"fit_t_min", q.fit_t_min},
                 {"width_tolerance", q.width_tolerance},
                 {"shift_tolerance", q.shift_tolerance},
                 {"zero_coupling_tolerance", q.zero_coupling_tolerance}};
  return j;
}

void validate_for(const RunConfig& c, Mode mode) {
  if (c.mode && *c.mode != mode)
    throw ConfigError("mode", 0,
                      "config is for '" + to_string(*c.mode) + "' but the subcommand is '" +
                          to_string(mode) + "'");

  const bool needs_ohmic = mode == Mode::Nonadiabatic || mode == Mode::Density ||
                           mode == Mode::Fig2 || mode == Mode::Fig3;
  if (needs_ohmic && c.bath.kind != SpectrumKind::Ohmic)
    throw ConfigError("bath.kind", 0, to_string(mode) + " requires an ohmic bath");

  const bool needs_rotation = mode == Mode::Exact || mode == Mode::Adiabatic ||
                              mode == Mode::Nonadiabatic || mode == Mode::Density ||
                              mode == Mode::Fig2 || mode == Mode::Oracle;
  const bool sweeps_rotation = c.sweep && c.sweep->name == "omega0_over_B";
  if (needs_rotation && !sweeps_rotation && !(c.field.omega0_magnitude() > 0.0))
    throw ConfigError("field.omega0_over_B", 0, "must be > 0 for " + to_string(mode));
  if (needs_rotation && sweeps_rotation && !(c.sweep->min > 0.0))
    throw ConfigError("sweep.min", 0, "omega0_over_B must stay > 0 for " + to_string(mode));

  const bool takes_sweep =
      mode == Mode::Exact || mode == Mode::Adiabatic || mode == Mode::Nonadiabatic;
  if (c.sweep && !takes_sweep)
    throw ConfigError("sweep", 0, to_string(mode) + " does not take a sweep");
}

}  // namespace gpd::cli
