#include "pe/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pe/errors.hpp"

namespace pe {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw ValidationError(key + ": expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw ValidationError(key + ": expected an integer, got '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < -2147483647LL || v > 2147483647LL) throw ValidationError(key + ": integer out of range");
  return static_cast<int>(v);
}

struct Key {
  bool required;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Member>
Key real(bool required, Member member) {
  return {required,
          [member](RunConfig& c, const std::string& k, const std::string& v) { member(c) = to_double(k, v); },
          [member](const RunConfig& c) { return fmt_double(member(const_cast<RunConfig&>(c))); }};
}

template <class Member>
Key integer(bool required, Member member) {
  return {required,
          [member](RunConfig& c, const std::string& k, const std::string& v) { member(c) = to_int(k, v); },
          [member](const RunConfig& c) { return std::to_string(member(const_cast<RunConfig&>(c))); }};
}

// Canonical key order for parsing and echo.
const std::vector<std::pair<std::string, Key>>& keys() {
  static const std::vector<std::pair<std::string, Key>> table = {
      {"physics.nu_h", real(true, [](RunConfig& c) -> double& { return c.physics.nu_h; })},
      {"physics.nu_z", real(true, [](RunConfig& c) -> double& { return c.physics.nu_z; })},
      {"physics.f", real(true, [](RunConfig& c) -> double& { return c.physics.f; })},
      {"physics.rho0", real(true, [](RunConfig& c) -> double& { return c.physics.rho0; })},
      {"physics.g", real(true, [](RunConfig& c) -> double& { return c.physics.g; })},
      {"physics.h", real(true, [](RunConfig& c) -> double& { return c.physics.h; })},
      {"physics.tau1", real(true, [](RunConfig& c) -> double& { return c.physics.tau[0]; })},
      {"physics.tau2", real(true, [](RunConfig& c) -> double& { return c.physics.tau[1]; })},
      {"physics.vg1", real(true, [](RunConfig& c) -> double& { return c.physics.v_g[0]; })},
      {"physics.vg2", real(true, [](RunConfig& c) -> double& { return c.physics.v_g[1]; })},
      {"physics.lx", real(true, [](RunConfig& c) -> double& { return c.physics.lx; })},
      {"physics.ly", real(true, [](RunConfig& c) -> double& { return c.physics.ly; })},
      {"sim.dt", real(true, [](RunConfig& c) -> double& { return c.sim.dt; })},
      {"sim.t_end", real(true, [](RunConfig& c) -> double& { return c.sim.t_end; })},
      {"sim.nx", integer(true, [](RunConfig& c) -> int& { return c.sim.nx; })},
      {"sim.ny", integer(true, [](RunConfig& c) -> int& { return c.sim.ny; })},
      {"sim.nz", integer(true, [](RunConfig& c) -> int& { return c.sim.nz; })},
      {"sim.output_every", integer(false, [](RunConfig& c) -> int& { return c.sim.output_every; })},
      {"sim.snapshot_every", integer(false, [](RunConfig& c) -> int& { return c.sim.snapshot_every; })},
      {"sim.mode",
       {false,
        [](RunConfig& c, const std::string& k, const std::string& v) {
          if (v == "nonlinear") c.sim.mode = Mode::nonlinear;
          else if (v == "linear") c.sim.mode = Mode::linear;
          else throw ValidationError(k + ": expected 'nonlinear' or 'linear', got '" + v + "'");
        },
        [](const RunConfig& c) { return std::string(c.sim.mode == Mode::linear ? "linear" : "nonlinear"); }}},
      {"init.seed",
       {false,
        [](RunConfig& c, const std::string& k, const std::string& v) {
          std::uint64_t s = 0;
          const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
          if (ec != std::errc{} || ptr != v.data() + v.size())
            throw ValidationError(k + ": expected a non-negative integer, got '" + v + "'");
          c.sim.init.seed = s;
        },
        [](const RunConfig& c) { return std::to_string(c.sim.init.seed); }}},
      {"init.amplitude", real(false, [](RunConfig& c) -> double& { return c.sim.init.amplitude; })},
      {"init.slope", real(false, [](RunConfig& c) -> double& { return c.sim.init.slope; })},
      {"init.snapshot",
       {false, [](RunConfig& c, const std::string&, const std::string& v) { c.sim.init.snapshot = v; },
        [](const RunConfig& c) { return c.sim.init.snapshot; }}},
      {"spectrum.horizon", real(false, [](RunConfig& c) -> double& { return c.spectrum.horizon; })},
      {"spectrum.krylov", integer(false, [](RunConfig& c) -> int& { return c.spectrum.krylov; })},
      {"spectrum.tol", real(false, [](RunConfig& c) -> double& { return c.spectrum.tol; })},
  };
  return table;
}

}  // namespace

void validate(const RunConfig& cfg) {
  try {
    cfg.physics.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("physics.") + e.what());
  }
  cfg.sim.validate(cfg.physics);
  if (cfg.spectrum.krylov < 2) throw ValidationError("spectrum.krylov must be >= 2");
  if (!(cfg.spectrum.tol > 0.0)) throw ValidationError("spectrum.tol must be > 0");
  if (!std::isfinite(cfg.spectrum.horizon)) throw ValidationError("spectrum.horizon must be finite");
  if (cfg.spectrum.horizon > 0.0 && cfg.spectrum.horizon < cfg.sim.dt)
    throw ValidationError("spectrum.horizon must be >= sim.dt");
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, const Key*> lookup;
  for (const auto& [name, key] : keys()) lookup.emplace(name, &key);

  RunConfig cfg;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + "expected 'key = value'");
    const std::string name(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (name.empty()) throw ValidationError(where + "missing key");
    const auto it = lookup.find(name);
    if (it == lookup.end()) throw ValidationError(where + "unknown key '" + name + "'");
    if (!seen.insert(name).second) throw ValidationError(where + "duplicate key '" + name + "'");
    if (value.empty()) throw ValidationError(where + name + ": missing value");
    try {
      it->second->set(cfg, name, value);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  for (const auto& [name, key] : keys())
    if (key.required && !seen.count(name)) throw ValidationError("missing required key '" + name + "'");
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, key] : keys()) out.emplace_back(name, key.get(cfg));
  return out;
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_entries(cfg)) {
    if (k == "init.snapshot" && v.empty()) continue;
    out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace pe
