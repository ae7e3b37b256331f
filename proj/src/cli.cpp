#include "geomred/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>

namespace geomred::cli {

namespace fs = std::filesystem;
using io::json;

const Command& find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return c;
  throw Error(ErrorCode::InvalidInput, "unknown subcommand '" + name + "'");
}

std::string schema_help(const Command& c) {
  std::string s = "Input JSON fields (all optional; \"schema\": 1 may be given):\n";
  std::size_t w = 0;
  for (const auto& f : c.fields) w = std::max(w, f.name.size());
  for (const auto& f : c.fields)
    s += "  " + f.name + std::string(w + 2 - f.name.size(), ' ') + "(" + f.type + ", default " +
         f.fallback + ") " + f.doc + "\n";
  return s;
}

void validate_input(const Command& c, const json& in) {
  if (!in.is_object()) throw Error(ErrorCode::InvalidInput, "input must be a JSON object");
  for (auto it = in.begin(); it != in.end(); ++it) {
    if (it.key() == "schema") {
      if (!it->is_number_integer() || it->get<long>() != 1)
        throw Error(ErrorCode::InvalidInput, "unsupported schema version");
      continue;
    }
    const Field* f = nullptr;
    for (const auto& x : c.fields)
      if (x.name == it.key()) f = &x;
    if (!f) throw Error(ErrorCode::InvalidInput, "unknown field '" + it.key() + "' for " + c.name);
    const json& v = *it;
    bool ok = true;
    if (f->type == "number") ok = v.is_number();
    else if (f->type == "integer") ok = v.is_number_integer();
    else if (f->type == "bool") ok = v.is_boolean();
    else if (f->type == "string") ok = v.is_string();
    else if (f->type == "array") ok = v.is_array();
    else if (f->type == "matrix") ok = v.is_array() || v.is_object();
    else if (f->type == "object") ok = v.is_object();
    if (!ok) throw Error(ErrorCode::InvalidInput, "field '" + f->name + "' must be of type " + f->type);
  }
}

namespace {

void emit_error(std::ostream& err, const std::string& code, const std::string& msg, int exit) {
  json e = {{"error", {{"code", code}, {"message", msg}, {"exit", exit}}}};
  err << e.dump() << "\n";
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Command& c = find_command(cfg.subcommand);
    json in = json::object();
    if (!cfg.input_path.empty()) {
      const std::string text = io::read_file(cfg.input_path);
      try {
        in = json::parse(text);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
      }
    }
    validate_input(c, in);
    if (cfg.tol && !(*cfg.tol > 0 && *cfg.tol < 1))
      throw Error(ErrorCode::InvalidInput, "--tol must lie in (0, 1)");
    const Outputs files = c.exec(in, cfg);

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir))
      throw Error(ErrorCode::InvalidInput, "output directory is not writable: " + cfg.output_dir);
    for (const auto& [name, content] : files) io::write_file(fs::path(cfg.output_dir) / name, content);
    for (const auto& f : files) out << (fs::path(cfg.output_dir) / f.first).string() << "\n";
    return 0;
  } catch (const Error& e) {
    const int code = is_validation(e.code()) ? 1 : 2;
    emit_error(err, to_string(e.code()), e.what(), code);
    return code;
  } catch (const json::exception& e) {
    emit_error(err, to_string(ErrorCode::InvalidInput), e.what(), 1);
    return 1;
  } catch (const std::exception& e) {
    emit_error(err, "Internal", e.what(), 2);
    return 2;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"geomred: reduction toolkit for linear operators, normal forms and symplectic quotients"};
  app.require_subcommand(1);
  RunConfig cfg;
  double tol = 0;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.summary);
    sub->add_option("--input", cfg.input_path, "JSON problem spec");
    sub->add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "RNG seed (unsigned 64-bit)")->capture_default_str();
    sub->add_option("--tol", tol, "residual tolerance override");
    sub->add_flag("--plot", cfg.plot, "also write SVG plots where available");
    sub->footer(schema_help(c));
    sub->callback([&cfg, name = c.name] { cfg.subcommand = name; });
  }
  std::vector<const char*> argv;
  argv.push_back("geomred");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    emit_error(err, to_string(ErrorCode::InvalidInput), e.what(), 1);
    return 1;
  }
  for (auto* sub : app.get_subcommands())
    if (sub->count("--tol")) cfg.tol = tol;
  return run(cfg, out, err);
}

}  // namespace geomred::cli
