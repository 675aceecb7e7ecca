#pragma once

#include <string>
#include <vector>

#include "gridtomo/image.hpp"
#include "gridtomo/lattice.hpp"

namespace gridtomo {

struct BenchRow {
  int kappa = 0;
  double cgls_percent = 0.0;
  double bra_percent = 0.0;
  std::size_t cgls_wrong = 0;
  std::size_t bra_wrong = 0;
};

/// For every κ of the schedule: percent correct and wrong pixels of plain
/// rounding of x_κ and of BRA on x_κ. One CGLS run serves the whole schedule.
/// Throws NotUniquenessSet unless S is a set of binary uniqueness.
std::vector<BenchRow> run_bench(const Image& truth, const DirectionSet& s,
                                std::vector<int> schedule, bool deterministic = true);

/// "iterations,cgls_percent,bra_percent,cgls_wrong,bra_wrong" plus one line per row.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace gridtomo
