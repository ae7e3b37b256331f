#pragma once

#include "geomred/io.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace geomred::cli {

struct RunConfig {
  std::string subcommand;
  std::string input_path;  // empty: all defaults
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::optional<double> tol;
  bool plot = false;
};

// File name → content, written only after the whole command succeeded.
using Outputs = std::vector<std::pair<std::string, std::string>>;

struct Field {
  std::string name, type, fallback, doc;
};

struct Command {
  std::string name, summary;
  std::vector<Field> fields;
  std::function<Outputs(const io::json&, const RunConfig&)> exec;
};

const std::vector<Command>& commands();
const Command& find_command(const std::string& name);
std::string schema_help(const Command& c);

// Rejects unknown keys, wrong types and a schema version other than 1.
void validate_input(const Command& c, const io::json& in);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geomred::cli
