#pragma once
#include "kmchev/cartan.hpp"
#include <string>
#include <vector>

namespace kmchev {

struct GcmFile {
  Gcm gcm;
  std::vector<std::string> labels;
};

// {"matrix": [[...]], "labels": [...]} with labels optional.
GcmFile load_gcm_file(const std::string& path);
GcmFile parse_gcm_json(const std::string& text);

} // namespace kmchev
