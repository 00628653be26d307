#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "harmonium/eigenstates.hpp"
#include "harmonium/model.hpp"

namespace harmonium {

/// Numeric table with '#' metadata lines; rendered as CSV with 17 significant digits.
struct Table {
  std::vector<std::string> meta;  // "key=value", written as "# key=value"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

void write_csv(const Table& t, std::ostream& os);
Table read_csv(std::istream& is);
std::string format_double(double v);

enum class Scale { Linear, Log };

struct SweepSpec {
  std::string vary = "tau-ne";  // mass-ratio, tau-ne, tau-ee, tau-nn, nn, ne
  double min = 0;
  double max = 1;
  int points = 2;
  Scale scale = Scale::Linear;
  ModelParams fixed;
  QuantumNumbers state;
  Bipartition bipartition = Bipartition::NucleiVsElectrons;
  bool with_bo = false;

  void validate() const;
  std::vector<double> grid() const;
};

struct SweepResult {
  Table table;
  int failures = 0;
};

/// One row per grid point; a failing point is kept with NaN cells and status 1.
SweepResult run_sweep(const SweepSpec& spec);

extern const std::vector<std::string> kFigureIds;

struct FigureDataset {
  std::string id;
  Table table;
  bool sane = false;
  std::string sanity_message;
};

/// Builds a figure dataset and evaluates its sanity predicate (unknown id: InvalidParameters).
FigureDataset make_figure(const std::string& id);

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace harmonium
