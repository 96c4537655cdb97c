#pragma once

// Sectioned key=value configuration with line-precise diagnostics, plus
// builders for the domain types.  '#' and ';' start comments; values are
// scalars or comma-separated lists.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polsim/medium.hpp"

namespace polsim {

inline constexpr const char* artifact_version = "0.1.0";

class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& name = "<config>");

  const std::string& name() const { return name_; }
  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long get_int(const std::string& section, const std::string& key) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key) const;

  // FNV-1a over the raw text; recorded in output manifests
  std::uint64_t hash() const;

 private:
  const Entry* find(const std::string& section, const std::string& key) const;
  const Entry& require(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(const Entry& e, const std::string& what) const;

  std::string name_;
  std::string text_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

// Builders for the standard sections.  Missing sections or malformed values
// raise config errors naming the file, line, and key.
MediumParams medium_from(const ConfigFile& cfg);       // [medium]
ControlSchedule schedule_from(const ConfigFile& cfg);  // [schedule]
Grid grid_from(const ConfigFile& cfg);                 // [grid]

}  // namespace polsim
