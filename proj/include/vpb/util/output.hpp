#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vpb {

// CSV emission with 17 significant digits so files round-trip exactly.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void raw_row(const std::string& line);

 private:
  struct Impl;
  Impl* impl_;
};

std::string format_double(double v);

// Run manifest: config hash, tool version, backend, wall time. Written as
// JSON next to the run artifacts.
struct Manifest {
  std::uint64_t config_hash = 0;
  std::string command;
  std::string simd_backend;
  int threads = 1;
  double wall_seconds = 0.0;
  std::string version;

  void write(const std::string& path) const;
};

void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

}  // namespace vpb
