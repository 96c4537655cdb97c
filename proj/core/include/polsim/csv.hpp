#pragma once

// Deterministic CSV emission: fixed %.12g formatting, LF endings, no
// locale involvement, so identical inputs give byte-identical files.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace polsim {

std::string csv_number(double v);  // canonical %.12g

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void cells(const std::vector<std::string>& values);  // pre-formatted row

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t width_ = 0;
};

// manifest.txt: artifact version, config hash, and the emitted files,
// in emission order
void write_manifest(const std::string& dir, std::uint64_t config_hash,
                    const std::vector<std::string>& files);

}  // namespace polsim
