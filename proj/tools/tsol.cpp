#include "tsol/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Translating soliton toolkit"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  struct Flags {
    std::string config;
    std::map<std::string, std::string> values;
  };
  std::map<tsol::Command, Flags> flags;
  std::map<tsol::Command, CLI::App*> subs;
  for (tsol::Command c : tsol::all_commands()) {
    auto* sub = app.add_subcommand(std::string(tsol::command_name(c)));
    auto& f = flags[c];
    sub->add_option("--config", f.config, "key=value file; flags override it");
    std::vector<std::string> keys = tsol::allowed_keys(c);
    keys.insert(keys.end(), {"seed", "out"});
    for (const auto& key : keys) {
      sub->add_option_function<std::string>(
          "--" + key, [&f, key](const std::string& v) { f.values[key] = v; }, key);
    }
    subs[c] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return tsol::kExitUsage;
  }

  for (const auto& [command, sub] : subs) {
    if (!sub->parsed()) continue;
    const auto& f = flags[command];
    try {
      std::map<std::string, std::string> file;
      if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) {
          std::cerr << "error: cannot read " << f.config << '\n';
          return tsol::kExitIo;
        }
        file = tsol::parse_key_values(in);
      }
      const auto config = tsol::make_config(command, file, f.values);
      return tsol::run(config, std::cout, std::cerr);
    } catch (const tsol::UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return tsol::kExitUsage;
    }
  }
  return tsol::kExitUsage;
}
