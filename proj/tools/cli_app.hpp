#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace thzqkd::cli {

// Exit codes: 0 success, 2 configuration, 3 data/table resolution,
// 4 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

enum class SweepScale { kLinear, kLog };

struct SweepSpec {
  std::string variable;  // distance | frequency | transmissivity | omega
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  SweepScale scale = SweepScale::kLinear;

  std::vector<double> grid() const;
};

// Throws std::invalid_argument on malformed specs.
SweepSpec parse_sweep(const std::string& text);

// Record stream with a fixed column schema; cells are pre-formatted so the
// emitted bytes do not depend on locale or stream state.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double value);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

// Full command-line entry point; never throws.
int run(int argc, const char* const* argv);

}  // namespace thzqkd::cli
