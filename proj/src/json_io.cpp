#include "kmchev/json_io.hpp"
#include "kmchev/errors.hpp"
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace kmchev {

GcmFile parse_gcm_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::SyntaxError, std::string("GCM file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("matrix") || !j["matrix"].is_array())
    fail(ErrorCode::UsageError, "GCM file must be an object with a \"matrix\" array");
  std::vector<IVec> entries;
  for (const auto& row : j["matrix"]) {
    if (!row.is_array()) fail(ErrorCode::UsageError, "matrix rows must be arrays");
    IVec r;
    for (const auto& x : row) {
      if (!x.is_number_integer())
        fail(ErrorCode::UsageError, "matrix entries must be integers");
      r.emplace_back(static_cast<long>(x.get<long long>()));
    }
    entries.push_back(std::move(r));
  }
  GcmFile out{Gcm::validate(entries), {}};
  if (j.contains("labels")) {
    for (const auto& l : j["labels"]) out.labels.push_back(l.get<std::string>());
  }
  return out;
}

GcmFile load_gcm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::UsageError, "cannot open file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_gcm_json(ss.str());
}

} // namespace kmchev
