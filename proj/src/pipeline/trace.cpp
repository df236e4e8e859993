#include "dipstop/pipeline/trace.hpp"

#include <fstream>
#include <stdexcept>

namespace dipstop::pipeline {

nlohmann::json trace_to_json(const RunTraceDoc& doc) {
  nlohmann::json j;
  j["format"] = "run-trace-v1";
  j["entries"] = nlohmann::json::array();
  for (const auto& e : doc.trace.entries) {
    nlohmann::json entry;
    entry["iteration"] = e.iteration;
    entry["snapshot"] = e.snapshot_ref;
    entry["scored"] = e.scored;
    if (e.scored) {
      entry["raw_score"] = e.raw_score;
      entry["smoothed_score"] = e.smoothed_score;
    }
    j["entries"].push_back(std::move(entry));
  }
  j["final_choice"] = doc.trace.final_choice;
  j["loss_curve"] = doc.trace.loss_curve;
  if (doc.decision) {
    const auto& d = *doc.decision;
    j["stop"] = {{"final_index", d.final_index},
                 {"coarse_index", d.coarse_index},
                 {"declared_at", d.declared_at},
                 {"no_peak_declared", d.no_peak_declared},
                 {"raw", d.raw},
                 {"smoothed", d.smoothed}};
  }
  j["effective_config"] = doc.effective_config;
  j["meta"] = doc.meta;
  return j;
}

RunTraceDoc trace_from_json(const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "run-trace-v1")
    throw std::runtime_error("unknown trace format");
  RunTraceDoc doc;
  for (const auto& entry : j.at("entries")) {
    dip::TraceEntry e;
    e.iteration = entry.at("iteration").get<int>();
    e.snapshot_ref = entry.at("snapshot").get<std::string>();
    e.scored = entry.at("scored").get<bool>();
    if (e.scored) {
      e.raw_score = entry.at("raw_score").get<float>();
      e.smoothed_score = entry.at("smoothed_score").get<float>();
    }
    doc.trace.entries.push_back(std::move(e));
  }
  doc.trace.final_choice = j.at("final_choice").get<int>();
  doc.trace.loss_curve = j.at("loss_curve").get<std::vector<float>>();
  if (j.contains("stop")) {
    const auto& s = j["stop"];
    stopctl::StopDecision d;
    d.final_index = s.at("final_index").get<int>();
    d.coarse_index = s.at("coarse_index").get<int>();
    d.declared_at = s.at("declared_at").get<int>();
    d.no_peak_declared = s.at("no_peak_declared").get<bool>();
    d.raw = s.at("raw").get<std::vector<float>>();
    d.smoothed = s.at("smoothed").get<std::vector<float>>();
    doc.decision = std::move(d);
  }
  if (j.contains("effective_config")) doc.effective_config = j["effective_config"];
  if (j.contains("meta")) doc.meta = j["meta"];
  return doc;
}

void write_trace(const RunTraceDoc& doc, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write trace: " + path.string());
  os << trace_to_json(doc).dump(2) << "\n";
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

RunTraceDoc read_trace(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open trace: " + path.string());
  nlohmann::json j;
  is >> j;
  return trace_from_json(j);
}

}  // namespace dipstop::pipeline
