#include "vpb/util/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace vpb {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) throw std::runtime_error("cannot open output file: " + path);
  for (size_t i = 0; i < columns.size(); ++i) impl_->out << (i ? "," : "") << columns[i];
  impl_->out << "\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i)
    impl_->out << (i ? "," : "") << format_double(values[i]);
  impl_->out << "\n";
}

void CsvWriter::raw_row(const std::string& line) { impl_->out << line << "\n"; }

void Manifest::write(const std::string& path) const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["command"] = command;
  j["simd_backend"] = simd_backend;
  j["threads"] = threads;
  j["wall_seconds"] = wall_seconds;
  j["version"] = version;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open manifest file: " + path);
  out << j.dump(2) << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file: " + path);
  out << content;
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

}  // namespace vpb
