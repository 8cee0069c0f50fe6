#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "tasks.hpp"
#include "zoo.hpp"

int main(int argc, char** argv) {
  using namespace perilimit::cli;

  CLI::App app{"perilimit: local limits of bond-based nonlocal energies"};
  std::string config_path, out_dir = ".";
  std::optional<std::string> task;
  std::optional<long long> seed, threads, quad_order;
  bool no_timestamp = false, list = false, schema_only = false;
  app.add_option("--config", config_path, "INI or JSON config file");
  app.add_option("--task", task, "quadrature-check | gamma-limit | recoverability | convexify | converge | counterexamples");
  app.add_option("--out", out_dir, "directory for summary.json and detail.csv");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker thread cap");
  app.add_option("--quad-order", quad_order, "sphere rule order (points on S^1, Gauss-Legendre order on S^2)");
  app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp from summary.json");
  app.add_flag("--list-zoo", list, "list built-in densities and potentials");
  app.add_flag("--list-keys", schema_only, "list config keys with defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (list) {
    std::cout << list_zoo();
    return 0;
  }
  if (schema_only) {
    std::cout << describe_schema();
    return 0;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg.load_file(config_path);
    if (task) cfg.set("run", "task", *task);
    if (seed) cfg.set("run", "seed", std::to_string(*seed));
    if (threads) cfg.set("run", "threads", std::to_string(*threads));
    if (quad_order) cfg.set("quadrature", "order", std::to_string(*quad_order));
  } catch (const ConfigError& e) {
    std::cerr << "perilimit: invalid config: " << e.what() << '\n';
    return kExitConfig;
  }
  return run_and_report(cfg, out_dir, !no_timestamp, std::cerr);
}
