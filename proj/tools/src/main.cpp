#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lorentz/types.hpp"

using namespace lorentz::cli;

namespace {

struct Leaf {
  const Operation* op = nullptr;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> options;
};

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("schema violation at /: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("schema violation at /: expected a JSON object");
  return j;
}

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

int execute(const Operation& op, Json cfg) {
  // Space and geodesic values given as file paths are loaded in place.
  for (const Field& f : op.fields)
    if ((f.type == FieldType::space || f.type == FieldType::geodesic) && cfg.contains(f.key) && cfg[f.key].is_string())
      cfg[f.key] = parse_flag(cfg[f.key].get<std::string>(), f.type, "/" + f.key);
  const Json resolved = validate(cfg, op.fields);
  const Json doc{{"operation", op.name}, {"config", resolved}, {"result", op.run(resolved)}};
  const std::string text = doc.dump(2) + "\n";
  if (resolved.contains("out")) {
    const std::string path = resolved["out"];
    std::ofstream out(path);
    if (!out || !(out << text)) throw lorentz::Error("cannot write '" + path + "'");
  } else {
    std::cout << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const std::vector<Operation> ops = operations(workers_from_env());

    CLI::App app{"Synthetic Lorentzian geometry: time separations, curve metrics, conjugacy and comparison."};
    app.require_subcommand(1);
    std::map<std::string, CLI::App*> groups;
    std::vector<std::unique_ptr<Leaf>> leaves;
    std::string config_path;

    for (const Operation& op : ops) {
      CLI::App* parent = &app;
      std::string prefix;
      for (std::size_t i = 0; i + 1 < op.path.size(); ++i) {
        prefix += op.path[i] + " ";
        auto it = groups.find(prefix);
        if (it == groups.end()) {
          CLI::App* g = parent->add_subcommand(op.path[i], op.path[i] + " operations");
          g->require_subcommand(1);
          it = groups.emplace(prefix, g).first;
        }
        parent = it->second;
      }
      auto leaf = std::make_unique<Leaf>();
      leaf->op = &op;
      leaf->app = parent->add_subcommand(op.path.back(), op.help);
      for (const Field& f : op.fields) {
        std::string& slot = leaf->raw[f.key];
        if (f.positional)
          leaf->options[f.key] = leaf->app->add_option(f.key, slot, f.help);
        else if (f.type == FieldType::boolean)
          leaf->options[f.key] = leaf->app->add_flag(flag_name(f.key), f.help);
        else
          leaf->options[f.key] = leaf->app->add_option(flag_name(f.key), slot, f.help);
      }
      leaf->app->add_option("--config", config_path, "JSON file whose keys override the flags");
      leaves.push_back(std::move(leaf));
    }

    std::string run_path;
    CLI::App* run = app.add_subcommand("run", "run the operation named by the \"operation\" key of a JSON config");
    run->add_option("config", run_path, "experiment config")->required();

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e) == 0 ? 0 : 2;
    }

    if (run->parsed()) {
      Json cfg = read_config(run_path);
      if (!cfg.contains("operation") || !cfg["operation"].is_string())
        throw UsageError("schema violation at /operation: required string");
      const std::string name = cfg["operation"];
      const auto it = std::find_if(ops.begin(), ops.end(), [&](const Operation& o) { return o.name == name; });
      if (it == ops.end()) throw UsageError("schema violation at /operation: unknown operation '" + name + "'");
      cfg.erase("operation");
      return execute(*it, cfg);
    }

    for (const auto& leaf : leaves) {
      if (!leaf->app->parsed()) continue;
      Json cfg = Json::object();
      for (const Field& f : leaf->op->fields) {
        if (leaf->options[f.key]->count() == 0) continue;
        cfg[f.key] = f.type == FieldType::boolean ? Json(true) : parse_flag(leaf->raw[f.key], f.type, "/" + f.key);
      }
      if (!config_path.empty()) {
        const Json overrides = read_config(config_path);
        for (const auto& [key, value] : overrides.items()) cfg[key] = value;
      }
      return execute(*leaf->op, cfg);
    }
    throw UsageError("no operation selected");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const lorentz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
