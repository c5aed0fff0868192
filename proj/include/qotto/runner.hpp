#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "qotto/config.hpp"

namespace qotto {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

// 17 significant digits, which read back to the same double.
std::string format_double(double v);

// Minimal CSV writer; numbers go through format_double.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(const std::string& v);
  CsvWriter& operator<<(const char* v) { return *this << std::string(v); }
  void end_row();

 private:
  void separator();
  std::FILE* file_ = nullptr;
  std::size_t columns_ = 0;
  std::size_t column_ = 0;
};

struct RunResult {
  std::vector<std::string> files;  // written, relative to the output directory
};

// Executes config.mode, writing manifest.json and the mode's CSV files into
// config.output_dir. Library errors propagate.
RunResult run(const RunConfig& config);

// run() with errors mapped to exit codes and messages on stderr.
int run_with_exit_code(const RunConfig& config);

}  // namespace qotto
