#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "scma/codebook.hpp"

namespace scma {

/// JSON document with keys K, N, J, M, design, factor_graph,
/// mother_constellation, operators and codebooks. Doubles are written with
/// round-trip precision, so read(write(s)) reproduces s exactly.
std::string serialize_system(const ScmaSystem& system);

/// Rebuilds the system from its stored parts and checks the stored
/// codebooks against the rebuilt ones.
ScmaSystem parse_system(std::string_view json_text);

void write_system(const ScmaSystem& system, const std::filesystem::path& path);
ScmaSystem read_system(const std::filesystem::path& path);

}  // namespace scma
