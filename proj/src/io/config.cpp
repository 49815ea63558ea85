#include "msdd/io/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace msdd::io {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::multimap<std::string, Entry>;

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"domain", {"L", "N"}},
      {"params", {"sigma", "eps", "gamma", "eta", "dt", "T", "dealias", "seed", "coulomb", "phi_base"}},
      {"potential", {"preset", "value", "base", "depth", "offset", "charge", "softening"}},
      {"pump", {"term"}},
      {"initial", {"kind", "charge", "A_norm", "Pi_norm", "scale", "max_mode"}},
      {"output", {"directory", "record_every", "snapshot_every"}},
      {"estimates", {"radii", "deltas", "ensemble", "A_H1", "A_max_mode", "grids"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

std::map<std::string, Section> tokenize(const std::string& text) {
  std::map<std::string, Section> out;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_at(line, "unterminated section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (!known_keys().count(section)) fail_at(line, "unknown section [" + section + "]");
      out[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_at(line, "expected 'key = value', got '" + s + "'");
    if (section.empty()) fail_at(line, "key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto& allowed = known_keys().at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail_at(line, "unknown key '" + key + "' in [" + section + "]");
    }
    if (value.empty()) fail_at(line, "empty value for '" + key + "'");
    if (key != "term" && out[section].count(key)) fail_at(line, "duplicate key '" + key + "' in [" + section + "]");
    out[section].insert({key, Entry{value, line}});
  }
  return out;
}

double to_double(const Entry& e, const std::string& key) {
  const char* b = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(b, &end);
  if (end == b || *end != '\0' || errno == ERANGE) fail_at(e.line, "'" + key + "' expects a number, got '" + e.value + "'");
  return v;
}

long long to_integer(const Entry& e, const std::string& key) {
  const char* b = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(b, &end, 10);
  if (end == b || *end != '\0' || errno == ERANGE) {
    fail_at(e.line, "'" + key + "' expects an integer, got '" + e.value + "'");
  }
  return v;
}

bool to_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "1" || e.value == "yes" || e.value == "on") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no" || e.value == "off") return false;
  fail_at(e.line, "'" + key + "' expects true or false, got '" + e.value + "'");
}

std::vector<Entry> split(const Entry& e) {
  std::vector<Entry> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Entry{trim(item), e.line});
  return out;
}

std::vector<double> to_doubles(const Entry& e, const std::string& key) {
  std::vector<double> out;
  for (const Entry& p : split(e)) out.push_back(to_double(p, key));
  return out;
}

std::array<double, 3> to_triple(const Entry& e, const std::string& key) {
  const std::vector<double> v = to_doubles(e, key);
  if (v.size() == 1) return {v[0], v[0], v[0]};
  if (v.size() != 3) fail_at(e.line, "'" + key + "' expects 1 or 3 values");
  return {v[0], v[1], v[2]};
}

class Reader {
 public:
  explicit Reader(const std::map<std::string, Section>& t) : t_(t) {}

  const Entry* get(const std::string& section, const std::string& key) const {
    const auto s = t_.find(section);
    if (s == t_.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }
  void number(const std::string& s, const std::string& k, double& out) const {
    if (const Entry* e = get(s, k)) out = to_double(*e, k);
  }
  void integer(const std::string& s, const std::string& k, int& out) const {
    if (const Entry* e = get(s, k)) {
      const long long v = to_integer(*e, k);
      if (v < -1000000000LL || v > 1000000000LL) fail_at(e->line, "'" + k + "' is out of range");
      out = static_cast<int>(v);
    }
  }
  void boolean(const std::string& s, const std::string& k, bool& out) const {
    if (const Entry* e = get(s, k)) out = to_bool(*e, k);
  }
  std::vector<Entry> all(const std::string& section, const std::string& key) const {
    std::vector<Entry> out;
    const auto s = t_.find(section);
    if (s == t_.end()) return out;
    const auto [b, e] = s->second.equal_range(key);
    for (auto it = b; it != e; ++it) out.push_back(it->second);
    std::sort(out.begin(), out.end(), [](const Entry& x, const Entry& y) { return x.line < y.line; });
    return out;
  }

 private:
  const std::map<std::string, Section>& t_;
};

[[noreturn]] void invalid(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

void validate(const RunConfig& c) {
  for (int a = 0; a < 3; ++a) {
    if (!(c.L[a] > 0.0) || !std::isfinite(c.L[a])) invalid("domain.L", "box lengths must be positive and finite");
    if (c.N[a] < 2) invalid("domain.N", "at least 2 modes per axis are required");
    if (c.N[a] > 64) invalid("domain.N", "at most 64 modes per axis are supported");
  }
  const Params& p = c.params;
  const std::pair<const char*, double> damping[] = {{"params.sigma", p.sigma}, {"params.eps", p.eps},
                                                    {"params.gamma", p.gamma}};
  for (const auto& [k, v] : damping) {
    if (!(v >= 0.0) || !std::isfinite(v)) invalid(k, "nonnegative damping: the coefficient must be >= 0");
  }
  if (!(p.eta >= 0.0) || !std::isfinite(p.eta)) invalid("params.eta", "the Lyapunov weight must be >= 0");
  if (!(p.dt > 0.0) || !std::isfinite(p.dt)) invalid("params.dt", "time step must be positive");
  if (!(p.T >= 0.0) || !std::isfinite(p.T)) invalid("params.T", "final time must be >= 0");
  const InitialSpec& s = c.initial;
  if (!(s.charge >= 0.0) || !std::isfinite(s.charge)) invalid("initial.charge", "must be >= 0");
  if (!(s.A_norm >= 0.0) || !std::isfinite(s.A_norm)) invalid("initial.A_norm", "must be >= 0");
  if (!(s.Pi_norm >= 0.0) || !std::isfinite(s.Pi_norm)) invalid("initial.Pi_norm", "must be >= 0");
  if (!std::isfinite(s.scale)) invalid("initial.scale", "must be finite");
  if (s.max_mode < 1) invalid("initial.max_mode", "must be >= 1");
  if (c.record_every < 1) invalid("output.record_every", "must be >= 1");
  if (c.snapshot_every < 0) invalid("output.snapshot_every", "must be >= 0");
  if (c.output_dir.empty()) invalid("output.directory", "must not be empty");
  const EstimatesConfig& e = c.estimates;
  for (double r : e.radii) {
    if (!(r > 0.0) || !std::isfinite(r)) invalid("estimates.radii", "radii must be positive");
  }
  if (e.radii.empty()) invalid("estimates.radii", "at least one radius is required");
  for (double d : e.deltas) {
    if (!(d > 0.0) || !std::isfinite(d)) invalid("estimates.deltas", "delta must be positive");
  }
  if (e.ensemble < 1) invalid("estimates.ensemble", "must be >= 1");
  if (!(e.A_H1 >= 0.0) || !std::isfinite(e.A_H1)) invalid("estimates.A_H1", "must be >= 0");
  if (e.A_max_mode < 1) invalid("estimates.A_max_mode", "must be >= 1");
  for (int g : e.spectrum_grids) {
    if (g < 2 || g > 12) invalid("estimates.grids", "grid sizes must lie in [2, 12] for dense eigensolves");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const auto tokens = tokenize(text);
  const Reader r(tokens);
  RunConfig c;

  if (const Entry* e = r.get("domain", "L")) c.L = to_triple(*e, "L");
  if (const Entry* e = r.get("domain", "N")) {
    const std::array<double, 3> n = to_triple(*e, "N");
    for (int a = 0; a < 3; ++a) {
      if (n[a] != std::floor(n[a]) || std::abs(n[a]) > 1e6) fail_at(e->line, "'N' expects integers");
      c.N[a] = static_cast<int>(n[a]);
    }
  }

  Params& p = c.params;
  r.number("params", "sigma", p.sigma);
  r.number("params", "eps", p.eps);
  r.number("params", "gamma", p.gamma);
  r.number("params", "eta", p.eta);
  r.number("params", "dt", p.dt);
  r.number("params", "T", p.T);
  r.boolean("params", "dealias", p.dealias);
  r.boolean("params", "coulomb", p.coulomb);
  if (const Entry* e = r.get("params", "seed")) {
    const long long v = to_integer(*e, "seed");
    if (v < 0) fail_at(e->line, "'seed' must be >= 0");
    p.seed = static_cast<std::uint64_t>(v);
  }
  if (const Entry* e = r.get("params", "phi_base")) {
    if (e->value == "canonical") {
      p.phi_uses_paper_hamiltonian = false;
    } else if (e->value == "alternative") {
      p.phi_uses_paper_hamiltonian = true;
    } else {
      fail_at(e->line, "'phi_base' expects canonical or alternative, got '" + e->value + "'");
    }
  }

  if (const Entry* e = r.get("potential", "preset")) c.potential.name = e->value;
  r.number("potential", "value", c.potential.value);
  r.number("potential", "base", c.potential.base);
  r.number("potential", "depth", c.potential.depth);
  r.number("potential", "offset", c.potential.offset);
  r.number("potential", "charge", c.potential.charge);
  r.number("potential", "softening", c.potential.softening);

  for (const Entry& e : r.all("pump", "term")) {
    const std::vector<double> v = to_doubles(e, "term");
    if (v.size() != 9) fail_at(e.line, "'term' expects k1,k2,k3,d1,d2,d3,amplitude,omega,phase");
    PumpTerm t;
    for (int a = 0; a < 3; ++a) {
      if (v[static_cast<std::size_t>(a)] != std::floor(v[static_cast<std::size_t>(a)])) {
        fail_at(e.line, "pump mode numbers must be integers");
      }
      t.mode[static_cast<std::size_t>(a)] = static_cast<int>(v[static_cast<std::size_t>(a)]);
      t.direction[static_cast<std::size_t>(a)] = v[static_cast<std::size_t>(a) + 3];
    }
    t.amplitude = v[6];
    t.omega = v[7];
    t.phase = v[8];
    c.pump.terms.push_back(t);
  }

  if (const Entry* e = r.get("initial", "kind")) {
    if (e->value == "ground") {
      c.initial.kind = InitialKind::Ground;
    } else if (e->value == "random") {
      c.initial.kind = InitialKind::Random;
    } else if (e->value == "scaled") {
      c.initial.kind = InitialKind::Scaled;
    } else {
      fail_at(e->line, "'kind' expects ground, random or scaled, got '" + e->value + "'");
    }
  }
  r.number("initial", "charge", c.initial.charge);
  r.number("initial", "A_norm", c.initial.A_norm);
  r.number("initial", "Pi_norm", c.initial.Pi_norm);
  r.number("initial", "scale", c.initial.scale);
  r.integer("initial", "max_mode", c.initial.max_mode);

  if (const Entry* e = r.get("output", "directory")) c.output_dir = e->value;
  r.integer("output", "record_every", c.record_every);
  r.integer("output", "snapshot_every", c.snapshot_every);

  EstimatesConfig& est = c.estimates;
  if (const Entry* e = r.get("estimates", "radii")) est.radii = to_doubles(*e, "radii");
  if (const Entry* e = r.get("estimates", "deltas")) est.deltas = to_doubles(*e, "deltas");
  r.integer("estimates", "ensemble", est.ensemble);
  r.number("estimates", "A_H1", est.A_H1);
  r.integer("estimates", "A_max_mode", est.A_max_mode);
  if (const Entry* e = r.get("estimates", "grids")) {
    est.spectrum_grids.clear();
    for (const Entry& g : split(*e)) est.spectrum_grids.push_back(static_cast<int>(to_integer(g, "grids")));
  }

  validate(c);
  // domain-dependent conditions
  const Setup s = build(c);
  const double limit = stability_limit(*s.domain, c.params);
  if (c.params.dt > limit) {
    std::ostringstream os;
    os.precision(6);
    os << "params.dt: explicit RK4 stability requires dt <= " << limit << " on this grid, got " << c.params.dt;
    throw ConfigError(os.str());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Setup build(const RunConfig& cfg) {
  DomainPtr d;
  try {
    d = BoxDomain::make(cfg.L, cfg.N);
  } catch (const InvalidDomain& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  PotentialSet pot;
  try {
    pot = phi_preset(*d, cfg.potential);
  } catch (const InvalidPotential& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  std::optional<Pump> pump;
  try {
    pump.emplace(d, cfg.pump);
  } catch (const InvalidPump& e) {
    throw ConfigError(std::string("pump.term: ") + e.what());
  }
  State init = make_initial(d, cfg.initial, cfg.params.seed);
  return Setup{d, Model(d, cfg.params, *pump, pot), std::move(init)};
}

std::string output_directory(const RunConfig& cfg) {
  if (const char* env = std::getenv("MSDD_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return cfg.output_dir;
}

}  // namespace msdd::io
