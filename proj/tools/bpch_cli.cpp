#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bpch/commands.hpp"

namespace {

struct ConfigFlags {
  std::string config_path;
  std::string preset_name;
  std::map<std::string, std::string> values;
  std::vector<std::string> assignments;
  std::optional<bool> abort_on_fail;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value config file");
    app->add_option("--preset", preset_name, "example1 .. example4");
    for (const auto& [flag, key] :
         std::vector<std::pair<std::string, std::string>>{{"--scheme", "scheme"},
                                                          {"--eta", "eta"},
                                                          {"--eps", "eps"},
                                                          {"--nx", "nx"},
                                                          {"--ny", "ny"},
                                                          {"--dt", "dt"},
                                                          {"--t-end", "t_end"},
                                                          {"--seed", "seed"},
                                                          {"--out", "output_dir"},
                                                          {"--schemes", "schemes"},
                                                          {"--sizes", "sizes"},
                                                          {"--reference", "reference"}}) {
      app->add_option_function<std::string>(
          flag, [this, key = key](const std::string& v) { values[key] = v; }, key);
    }
    app->add_option("--abort-on-fail", abort_on_fail, "stop at the first Picard failure")
        ->expected(0, 1)
        ->default_str("true");
    app->add_option("--set", assignments, "extra key=value settings");
  }

  bpch::RunConfig build() const {
    bpch::ConfigBuilder b = preset_name.empty() ? bpch::ConfigBuilder{} : bpch::preset(preset_name);
    if (!config_path.empty()) b.load_file(config_path);
    for (const auto& a : assignments) b.load_text(a);
    for (const auto& [k, v] : values) b.set(k, v);
    if (abort_on_fail) b.set("abort_on_fail", *abort_on_fail ? "true" : "false");
    return b.build();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cahn-Hilliard solver with degenerate mobility"};
  app.require_subcommand(1);

  ConfigFlags run_flags, conv_flags, cmp_flags;
  CLI::App* run = app.add_subcommand("run", "run one simulation");
  run_flags.attach(run);
  CLI::App* conv = app.add_subcommand("converge", "spatial convergence study");
  conv_flags.attach(conv);
  CLI::App* cmp = app.add_subcommand("compare", "run several schemes on the same data");
  cmp_flags.attach(cmp);

  CLI::App* pre = app.add_subcommand("preset", "print a preset as key=value lines");
  std::string preset_name;
  pre->add_option("name", preset_name, "preset name; lists presets when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bpch::kExitConfig;
  }

  return bpch::guarded(
      [&]() -> int {
        if (run->parsed()) return bpch::cmd_run(run_flags.build(), std::cout);
        if (conv->parsed()) return bpch::cmd_converge(conv_flags.build(), std::cout);
        if (cmp->parsed()) return bpch::cmd_compare(cmp_flags.build(), std::cout);
        if (preset_name.empty()) {
          for (const auto& n : bpch::preset_names()) std::cout << n << '\n';
        } else {
          std::cout << bpch::to_manifest(bpch::preset(preset_name).build());
        }
        return bpch::kExitOk;
      },
      std::cerr);
}
