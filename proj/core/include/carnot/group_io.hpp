#pragma once

#include <filesystem>
#include <string>

#include "carnot/group.hpp"

namespace carnot {

/// Parses a group description of the form
///
///   {"step": 2, "layer_dims": [2, 1], "brackets": [[1, 2, 3, 1.0]]}
///
/// Bracket indices are 1-based over the concatenated basis. Missing
/// antisymmetric partners are added before the spec is returned; the result is
/// not validated (call validate_group_spec). Throws Error(parse_error) on
/// malformed text and Error(invalid_group) on structural problems.
GroupSpec parse_group_spec(const std::string& text, std::string name = {});
GroupSpec load_group_spec(const std::filesystem::path& path);

/// Inverse of parse_group_spec (every stored bracket is written, so partners
/// appear explicitly).
std::string dump_group_spec(const GroupSpec& spec);

/// Built-in name or path to a group file.
GroupSpec resolve_group(const std::string& name_or_path);

}  // namespace carnot
