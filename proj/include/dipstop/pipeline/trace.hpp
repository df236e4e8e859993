#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "dipstop/dip/engine.hpp"
#include "dipstop/stop_controller.hpp"

namespace dipstop::pipeline {

// The per-run trace document. Everything except `meta` is a deterministic
// function of (inputs, config, seed); reruns must reproduce those parts
// byte-for-byte. `meta` holds timestamps and other incidental facts.
struct RunTraceDoc {
  dip::ReconstructionTrace trace;
  std::optional<stopctl::StopDecision> decision;
  nlohmann::json effective_config;  // configuration echo
  nlohmann::json meta;              // excluded from determinism guarantees
};

nlohmann::json trace_to_json(const RunTraceDoc& doc);
RunTraceDoc trace_from_json(const nlohmann::json& j);

void write_trace(const RunTraceDoc& doc, const std::filesystem::path& path);
RunTraceDoc read_trace(const std::filesystem::path& path);

}  // namespace dipstop::pipeline
