#include "dipstop/pipeline/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dipstop::pipeline {

void write_report(const std::vector<EvalResult>& results,
                  const std::filesystem::path& path) {
  std::vector<EvalResult> rows = results;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const EvalResult& a, const EvalResult& b) {
                     return a.camera_tag != b.camera_tag
                                ? a.camera_tag < b.camera_tag
                                : a.id < b.id;
                   });

  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write report: " + path.string());
  os << "camera,id,chosen_iteration,scored_steps,psnr_chosen_db,psnr_best_db,"
        "stop_mode\n";
  char buf[64];
  double sum_chosen = 0.0, sum_best = 0.0;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.4f,%.4f", r.psnr_chosen, r.psnr_best);
    os << r.camera_tag << ',' << r.id << ',' << r.chosen_iteration << ','
       << r.scored_steps << ',' << buf << ','
       << (r.no_peak_declared ? "backstop" : "declared") << '\n';
    sum_chosen += r.psnr_chosen;
    sum_best += r.psnr_best;
  }
  if (rows.empty()) {
    os << "average,,,,n/a,n/a,\n";
  } else {
    std::snprintf(buf, sizeof(buf), "%.4f,%.4f",
                  sum_chosen / static_cast<double>(rows.size()),
                  sum_best / static_cast<double>(rows.size()));
    os << "average,,,," << buf << ",\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace dipstop::pipeline
