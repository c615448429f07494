#include "axiswirl/config.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include "axiswirl/error.hpp"

namespace axiswirl {

const char* to_string(RunKind k) noexcept {
  switch (k) {
    case RunKind::Ode: return "ode";
    case RunKind::ReactionDiffusion: return "rd";
    case RunKind::Euler1d: return "euler1d";
    case RunKind::Lagrangian: return "lagrangian";
  }
  return "ode";
}

std::optional<RunKind> parse_run_kind(const std::string& name) {
  if (name == "ode") return RunKind::Ode;
  if (name == "rd") return RunKind::ReactionDiffusion;
  if (name == "euler1d") return RunKind::Euler1d;
  if (name == "lagrangian") return RunKind::Lagrangian;
  return std::nullopt;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw BadValue(key, "'" + text + "' is not a number");
  }
  if (!std::isfinite(x)) throw BadValue(key, "must be finite");
  return x;
}

long long to_integer(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw BadValue(key, "'" + text + "' is not an integer");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "on" || text == "1") return true;
  if (text == "false" || text == "off" || text == "0") return false;
  throw BadValue(key, "expected true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

std::string list_text(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_double(xs[i]);
  return s;
}

double positive(const std::string& key, double x) {
  if (!(x > 0.0)) throw BadValue(key, "must be positive");
  return x;
}

double non_negative(const std::string& key, double x) {
  if (x < 0.0) throw BadValue(key, "must be >= 0");
  return x;
}

struct KeySpec {
  const char* section;
  const char* key;
  std::function<void(ConfigDocument&, const std::string&)> set;
  std::function<std::string(const ConfigDocument&)> get;  // empty string: omit
};

const std::vector<KeySpec>& key_table() {
  using D = ConfigDocument;
  using S = const std::string&;
  static const std::vector<KeySpec> table = {
      {"model", "kind",
       [](D& d, S v) {
         d.kind = parse_run_kind(v);
         if (!d.kind) throw BadValue("kind", "expected ode, rd, euler1d or lagrangian");
       },
       [](const D& d) { return d.kind ? std::string(to_string(*d.kind)) : std::string(); }},
      {"model", "nu", [](D& d, S v) { d.nu = non_negative("nu", to_double("nu", v)); },
       [](const D& d) { return format_double(d.nu); }},
      {"model", "sign",
       [](D& d, S v) {
         const long long s = to_integer("sign", v);
         if (s != 1 && s != -1) throw BadValue("sign", "must be +1 or -1");
         d.sign = static_cast<int>(s);
       },
       [](const D& d) { return std::to_string(d.sign); }},
      {"model", "dealias", [](D& d, S v) { d.dealias = to_bool("dealias", v); },
       [](const D& d) { return std::string(d.dealias ? "true" : "false"); }},
      {"model", "scheme",
       [](D& d, S v) {
         if (v == "imex") d.scheme = Scheme::ImexEuler;
         else if (v == "rk2") d.scheme = Scheme::Rk2Inviscid;
         else throw BadValue("scheme", "expected imex or rk2");
       },
       [](const D& d) { return std::string(to_string(d.scheme)); }},
      {"model", "d", [](D& d, S v) { d.d = non_negative("d", to_double("d", v)); },
       [](const D& d) { return format_double(d.d); }},

      {"grid", "n",
       [](D& d, S v) {
         const long long n = to_integer("n", v);
         if (n < 8 || (n & (n - 1)) != 0) throw BadValue("n", "must be a power of two >= 8");
         d.n = static_cast<std::size_t>(n);
       },
       [](const D& d) { return std::to_string(d.n); }},
      {"grid", "t_end", [](D& d, S v) { d.t_end = non_negative("t_end", to_double("t_end", v)); },
       [](const D& d) { return format_double(d.t_end); }},
      {"grid", "cap", [](D& d, S v) { d.cap = positive("cap", to_double("cap", v)); },
       [](const D& d) { return format_double(d.cap); }},
      {"grid", "dt0", [](D& d, S v) { d.dt0 = positive("dt0", to_double("dt0", v)); },
       [](const D& d) { return format_double(d.dt0); }},
      {"grid", "dt_min", [](D& d, S v) { d.dt_min = positive("dt_min", to_double("dt_min", v)); },
       [](const D& d) { return format_double(d.dt_min); }},
      {"grid", "cfl", [](D& d, S v) { d.cfl = positive("cfl", to_double("cfl", v)); },
       [](const D& d) { return format_double(d.cfl); }},
      {"grid", "dt", [](D& d, S v) { d.dt = positive("dt", to_double("dt", v)); },
       [](const D& d) { return format_double(d.dt); }},
      {"grid", "max_steps",
       [](D& d, S v) {
         const long long m = to_integer("max_steps", v);
         if (m < 0) throw BadValue("max_steps", "must be >= 0");
         d.max_steps = static_cast<std::size_t>(m);
       },
       [](const D& d) { return std::to_string(d.max_steps); }},

      {"init", "kind",
       [](D& d, S v) {
         try {
           d.init = parse_init_kind(v);
         } catch (const BadParams&) {
           throw BadValue("kind", "expected rd, gaussian, scaled or zero");
         }
       },
       [](const D& d) { return d.init ? std::string(to_string(*d.init)) : std::string(); }},
      {"init", "epsilon", [](D& d, S v) { d.epsilon = positive("epsilon", to_double("epsilon", v)); },
       [](const D& d) { return d.epsilon == 0.0 ? std::string() : format_double(d.epsilon); }},
      {"init", "amplitude",
       [](D& d, S v) { d.amplitude = positive("amplitude", to_double("amplitude", v)); },
       [](const D& d) { return format_double(d.amplitude); }},
      {"init", "frequency",
       [](D& d, S v) {
         const long long m = to_integer("frequency", v);
         if (m < 1 || m > (1 << 20)) throw BadValue("frequency", "must be a positive integer");
         d.frequency = static_cast<int>(m);
       },
       [](const D& d) { return std::to_string(d.frequency); }},
      {"init", "u0", [](D& d, S v) { d.u0 = to_double("u0", v); },
       [](const D& d) { return format_double(d.u0); }},
      {"init", "v0", [](D& d, S v) { d.v0 = to_double("v0", v); },
       [](const D& d) { return format_double(d.v0); }},

      {"output", "series_stride",
       [](D& d, S v) {
         const long long k = to_integer("series_stride", v);
         if (k < 1) throw BadValue("series_stride", "must be >= 1");
         d.series_stride = static_cast<std::size_t>(k);
       },
       [](const D& d) { return std::to_string(d.series_stride); }},
      {"output", "snapshot_stride",
       [](D& d, S v) {
         const long long k = to_integer("snapshot_stride", v);
         if (k < 0) throw BadValue("snapshot_stride", "must be >= 0");
         d.snapshot_stride = static_cast<std::size_t>(k);
       },
       [](const D& d) { return std::to_string(d.snapshot_stride); }},
      {"output", "snapshot_times",
       [](D& d, S v) {
         d.snapshot_times = to_list("snapshot_times", v);
         for (double t : d.snapshot_times) non_negative("snapshot_times", t);
       },
       [](const D& d) { return list_text(d.snapshot_times); }},

      {"sweep", "param", [](D& d, S v) { d.sweep_param = v; },
       [](const D& d) { return d.sweep_param; }},
      {"sweep", "values", [](D& d, S v) { d.sweep_values = to_list("values", v); },
       [](const D& d) { return list_text(d.sweep_values); }},
  };
  return table;
}

const KeySpec* find_key(const std::string& section, const std::string& key) {
  for (const auto& k : key_table()) {
    if (section == k.section && key == k.key) return &k;
  }
  return nullptr;
}

bool known_section(const std::string& s) {
  static const std::array<const char*, 5> names = {"model", "grid", "init", "output", "sweep"};
  return std::any_of(names.begin(), names.end(), [&](const char* n) { return s == n; });
}

// Checks that need more than one key.
void validate(const ConfigDocument& d) {
  if (d.scheme == Scheme::Rk2Inviscid && d.nu != 0.0) throw BadValue("scheme", "rk2 requires nu = 0");
  if (d.dt_min > d.dt0) throw BadValue("dt_min", "must not exceed dt0");
  if (!d.sweep_param.empty()) {
    const auto dot = d.sweep_param.find('.');
    if (dot == std::string::npos ||
        find_key(d.sweep_param.substr(0, dot), d.sweep_param.substr(dot + 1)) == nullptr) {
      throw BadValue("param", "'" + d.sweep_param + "' does not name a section.key");
    }
  }
}

}  // namespace

void set_config_value(ConfigDocument& doc, const std::string& section_key, const std::string& value) {
  const auto dot = section_key.find('.');
  const std::string section = dot == std::string::npos ? "" : section_key.substr(0, dot);
  const std::string key = dot == std::string::npos ? section_key : section_key.substr(dot + 1);
  const KeySpec* spec = find_key(section, key);
  if (spec == nullptr) throw UnknownKey(section_key);
  spec->set(doc, value);
  validate(doc);
}

ConfigDocument parse_config(const std::string& text) {
  ConfigDocument doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) throw ParseError(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    if (section.empty()) throw ParseError(line_no, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");

    const KeySpec* spec = find_key(section, key);
    if (spec == nullptr) throw UnknownKey(key);
    if (!seen.insert(section + "." + key).second) throw ParseError(line_no, "duplicate key '" + key + "'");
    spec->set(doc, value);
  }
  validate(doc);
  return doc;
}

std::string emit_config(const ConfigDocument& doc) {
  std::string out;
  std::string section;
  for (const auto& k : key_table()) {
    if (section != k.section) {
      section = k.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    const std::string value = k.get(doc);
    if (value.empty()) continue;
    out += std::string(k.key) + " = " + value + "\n";
  }
  return out;
}

ModelConfig ConfigDocument::model_config() const {
  ModelConfig c;
  c.nu = nu;
  c.sign = sign;
  c.dealias_on = dealias;
  c.scheme = scheme;
  return c;
}

StepController ConfigDocument::step_controller() const {
  StepController c;
  c.cap = cap;
  c.dt0 = dt0;
  c.dt_min = dt_min;
  c.cfl = cfl;
  return c;
}

InitParams ConfigDocument::init_params(InitKind fallback) const {
  InitParams p;
  p.kind = init.value_or(fallback);
  p.epsilon = epsilon;
  p.amplitude = amplitude;
  p.frequency = frequency;
  return p;
}

OdeParams ConfigDocument::ode_params() const {
  OdeParams p;
  p.d = d;
  return p;
}

}  // namespace axiswirl
