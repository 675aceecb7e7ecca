#include "gridtomo/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "gridtomo/bra.hpp"
#include "gridtomo/error.hpp"
#include "gridtomo/phantom.hpp"

namespace gridtomo {

std::vector<BenchRow> run_bench(const Image& truth, const DirectionSet& s,
                                std::vector<int> schedule, bool deterministic) {
  if (schedule.empty()) return {};
  if (std::any_of(schedule.begin(), schedule.end(), [](int k) { return k < 0; })) {
    throw Error(ErrorCode::InvalidArgument, "schedule entries must be >= 0");
  }
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());

  const BinaryReconstructor rec(s, truth.dims());
  const ProjectionVector p = forward_project(rec.matrix(), truth, deterministic);

  std::map<int, Image> snaps;
  for (int k : schedule) {
    if (k == 0) snaps.emplace(0, Image::zeros(truth.dims()));
  }
  SolverConfig cfg{schedule.back(), std::nullopt, deterministic};
  CglsResult run = cgls(rec.matrix(), p, cfg, [&](int it, const Image& x) {
    if (std::binary_search(schedule.begin(), schedule.end(), it)) snaps.emplace(it, x);
    return true;
  });
  // An early exact stop leaves the rest of the schedule at the final iterate.
  for (int k : schedule) snaps.emplace(k, run.x);

  BraOptions opt;
  opt.deterministic = deterministic;
  std::vector<BenchRow> rows;
  for (int k : schedule) {
    const Image& x = snaps.at(k);
    const Metrics plain = compare(truth, binary_round(x));
    opt.kappa = k;
    const Metrics full = compare(truth, rec.finish(x, opt, &p).binary);
    rows.push_back({k, plain.percent_correct, full.percent_correct, plain.wrong_count,
                    full.wrong_count});
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "iterations,cgls_percent,bra_percent,cgls_wrong,bra_wrong\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.2f,%.2f,%zu,%zu\n", r.kappa, r.cgls_percent,
                  r.bra_percent, r.cgls_wrong, r.bra_wrong);
    out += buf;
  }
  return out;
}

}  // namespace gridtomo
