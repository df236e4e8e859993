#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dipstop/nn/layers.hpp"

namespace dipstop::nn {

// Little-endian binary primitives shared by the checkpoint formats.
void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_string(std::ostream& os, const std::string& s);
void write_floats(std::ostream& os, const std::vector<float>& v);

std::uint32_t read_u32(std::istream& is);
std::uint64_t read_u64(std::istream& is);
std::string read_string(std::istream& is);
std::vector<float> read_floats(std::istream& is);

using ParamBlobs = std::map<std::string, std::vector<float>>;

// Snapshot of named parameters; order in the file is the map order.
ParamBlobs export_params(const std::vector<ParamRef>& params);

// Loads blobs into live parameters. Every parameter must be present with a
// matching element count; throws otherwise.
void import_params(const ParamBlobs& blobs, const std::vector<ParamRef>& params);

void write_blobs(std::ostream& os, const ParamBlobs& blobs);
ParamBlobs read_blobs(std::istream& is);

}  // namespace dipstop::nn
