#include "polsim/csv.hpp"

#include <cstdio>

#include "detail/msg.hpp"
#include "polsim/config.hpp"
#include "polsim/errors.hpp"

namespace polsim {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary), width_(columns.size()) {
  if (!out_)
    throw config_error(detail::msgf("cannot open '%s' for writing", path.c_str()));
  if (columns.empty()) throw config_error("csv: need at least one column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_)
    throw config_error(detail::msgf("csv '%s': row has %zu cells, header has %zu",
                                    path_.c_str(), values.size(), width_));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_number(values[i]);
  }
  out_ << '\n';
  if (!out_)
    throw config_error(detail::msgf("write failure on '%s'", path_.c_str()));
}

void CsvWriter::cells(const std::vector<std::string>& values) {
  if (values.size() != width_)
    throw config_error(detail::msgf("csv '%s': row has %zu cells, header has %zu",
                                    path_.c_str(), values.size(), width_));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << values[i];
  }
  out_ << '\n';
  if (!out_)
    throw config_error(detail::msgf("write failure on '%s'", path_.c_str()));
}

void write_manifest(const std::string& dir, std::uint64_t config_hash,
                    const std::vector<std::string>& files) {
  const std::string path = dir + "/manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error(detail::msgf("cannot open '%s' for writing", path.c_str()));
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
  out << "version " << artifact_version << '\n';
  out << "config_hash " << hex << '\n';
  for (const auto& f : files) out << "file " << f << '\n';
  if (!out) throw config_error(detail::msgf("write failure on '%s'", path.c_str()));
}

}  // namespace polsim
