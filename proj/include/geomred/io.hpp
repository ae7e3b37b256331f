#pragma once

#include "geomred/core.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace geomred::io {

using json = nlohmann::json;

// {"rows", "cols", "data"} with row-major data.
json to_json(const Mat& m);
json to_json(const Vec& v);
json to_json(cplx z);  // [re, im]
Mat mat_from_json(const json& j, const char* what);
Vec vec_from_json(const json& j, const char* what);
cplx cplx_from_json(const json& j, const char* what);

// Two-space indented dump with a trailing newline.
std::string dump(const json& j);
// Shortest round-trip decimal form.
std::string num(double x);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& content);

}  // namespace geomred::io
