#include "polsim/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "detail/msg.hpp"
#include "polsim/errors.hpp"

namespace polsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw config_error(detail::msgf("cannot open config file '%s'", path.c_str()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& name) {
  ConfigFile cfg;
  cfg.name_ = name;
  cfg.text_ = text;

  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto cut = raw.find_first_of("#;"); cut != std::string::npos)
      raw.erase(cut);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw config_error(detail::msgf("%s:%d: malformed section header '%s'",
                                        name.c_str(), lineno, line.c_str()));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw config_error(detail::msgf("%s:%d: empty section name", name.c_str(), lineno));
      cfg.sections_[section];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(detail::msgf("%s:%d: expected 'key = value', got '%s'",
                                      name.c_str(), lineno, line.c_str()));
    if (section.empty())
      throw config_error(detail::msgf("%s:%d: key outside any [section]",
                                      name.c_str(), lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw config_error(detail::msgf("%s:%d: empty key", name.c_str(), lineno));
    auto& slot = cfg.sections_[section];
    if (auto it = slot.find(key); it != slot.end())
      throw config_error(detail::msgf("%s:%d: duplicate key '%s.%s' (first on line %d)",
                                      name.c_str(), lineno, section.c_str(), key.c_str(),
                                      it->second.line));
    slot[key] = Entry{trim(line.substr(eq + 1)), lineno};
  }
  return cfg;
}

bool ConfigFile::has_section(const std::string& section) const {
  return sections_.count(section) != 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

const ConfigFile::Entry& ConfigFile::require(const std::string& section,
                                             const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw config_error(detail::msgf("%s: missing key '%s.%s'", name_.c_str(),
                                    section.c_str(), key.c_str()));
  return *e;
}

void ConfigFile::fail(const Entry& e, const std::string& what) const {
  throw config_error(detail::msgf("%s:%d: %s (value '%s')", name_.c_str(), e.line,
                                  what.c_str(), e.value.c_str()));
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key) const {
  return require(section, key).value;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0')
    fail(e, "expected a number for '" + key + "'");
  return v;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  char* end = nullptr;
  const long v = std::strtol(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0')
    fail(e, "expected an integer for '" + key + "'");
  return v;
}

long ConfigFile::get_int(const std::string& section, const std::string& key,
                         long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const std::string& v = e->value;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(*e, "expected a boolean for '" + key + "'");
}

std::vector<double> ConfigFile::get_list(const std::string& section,
                                         const std::string& key) const {
  const Entry& e = require(section, key);
  std::vector<double> out;
  std::istringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) fail(e, "empty element in list '" + key + "'");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
      fail(e, "non-numeric element in list '" + key + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(e, "empty list for '" + key + "'");
  return out;
}

std::uint64_t ConfigFile::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char byte : text_) {
    h ^= byte;
    h *= 1099511628211ull;
  }
  return h;
}

MediumParams medium_from(const ConfigFile& cfg) {
  MediumParams m;
  m.g_root_n = cfg.get_double("medium", "g_root_n");
  m.gamma_ab = cfg.get_double("medium", "gamma_ab", 0.0);
  m.gamma_bc = cfg.get_double("medium", "gamma_bc", 0.0);
  m.c = cfg.get_double("medium", "c", 1.0);
  m.validate();
  return m;
}

ControlSchedule schedule_from(const ConfigFile& cfg) {
  ControlSchedule s;
  const std::string type = cfg.get_string("schedule", "type");
  if (type == "constant") {
    s.shape = ControlSchedule::Constant{cfg.get_double("schedule", "omega")};
  } else if (type == "tanh_pair") {
    ControlSchedule::TanhPair p;
    p.amplitude = cfg.get_double("schedule", "amplitude");
    p.sharpness = cfg.get_double("schedule", "sharpness");
    p.t_off = cfg.get_double("schedule", "t_off");
    p.t_on = cfg.get_double("schedule", "t_on");
    s.shape = p;
  } else if (type == "sampled") {
    ControlSchedule::Sampled sam;
    sam.t = cfg.get_list("schedule", "t");
    sam.omega = cfg.get_list("schedule", "omega");
    s.shape = std::move(sam);
  } else {
    throw config_error(detail::msgf(
        "%s: schedule.type must be constant, tanh_pair, or sampled (got '%s')",
        cfg.name().c_str(), type.c_str()));
  }
  s.retarded = cfg.get_bool("schedule", "retarded", false);
  s.validate();
  return s;
}

Grid grid_from(const ConfigFile& cfg) {
  Grid g;
  g.z_min = cfg.get_double("grid", "z_min");
  g.z_max = cfg.get_double("grid", "z_max");
  g.n_z = std::size_t(cfg.get_int("grid", "n_z"));
  g.t_min = cfg.get_double("grid", "t_min");
  g.t_max = cfg.get_double("grid", "t_max");
  g.n_t = std::size_t(cfg.get_int("grid", "n_t"));
  g.validate();
  return g;
}

}  // namespace polsim
