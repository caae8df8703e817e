#include "carnot/group_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "carnot/error.hpp"

namespace carnot {

GroupSpec parse_group_spec(const std::string& text, std::string name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("group file is not valid JSON: ") + e.what());
  }
  try {
    const int step = doc.at("step").get<int>();
    auto dims = doc.at("layer_dims").get<std::vector<int>>();
    std::vector<StructureConstant> brackets;
    if (doc.contains("brackets")) {
      for (const auto& entry : doc.at("brackets")) {
        if (!entry.is_array() || entry.size() != 4) {
          throw Error(ErrorCode::parse_error, "each bracket must be [i, j, k, c]");
        }
        brackets.push_back({entry[0].get<int>() - 1, entry[1].get<int>() - 1, entry[2].get<int>() - 1,
                            entry[3].get<double>()});
      }
    }
    if (name.empty() && doc.contains("name")) name = doc.at("name").get<std::string>();
    return GroupSpec::with_completed_brackets(step, std::move(dims), std::move(brackets), std::move(name));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed group file: ") + e.what());
  }
}

GroupSpec load_group_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open group file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_group_spec(ss.str(), path.stem().string());
}

std::string dump_group_spec(const GroupSpec& spec) {
  nlohmann::ordered_json doc;
  if (!spec.name().empty()) doc["name"] = spec.name();
  doc["step"] = spec.step();
  doc["layer_dims"] = spec.layer_dims();
  auto br = nlohmann::ordered_json::array();
  for (const auto& b : spec.brackets()) br.push_back({b.i + 1, b.j + 1, b.k + 1, b.c});
  doc["brackets"] = std::move(br);
  return doc.dump(2);
}

GroupSpec resolve_group(const std::string& name_or_path) {
  if (groups::is_builtin_name(name_or_path)) return groups::builtin(name_or_path);
  if (std::filesystem::exists(name_or_path)) return load_group_spec(name_or_path);
  throw Error(ErrorCode::invalid_argument,
              "'" + name_or_path + "' is neither a built-in group name nor a readable file");
}

}  // namespace carnot
