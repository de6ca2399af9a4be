#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tpq/cli.hpp"

int main(int argc, char** argv) {
  using namespace tpq::cli;
  CLI::App app{"tpq: exact checks for twisted Poisson structures and their quantization"};
  std::string command, target, json_path;
  Options opt;
  bool no_timing = false;
  app.add_option("command", command, "command")->required()->check(CLI::IsMember(kCommands));
  app.add_option("file", target, "structure file, or example name for run-example")->required();
  app.add_option("--n", opt.n, "example size (run-example)")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "seed for randomized commands");
  app.add_option("--json", json_path, "write the JSON report here ('-' for stdout)");
  app.add_option("--max-dim", opt.max_dim, "override the chart dimension limit")->check(CLI::NonNegativeNumber);
  app.add_option("--trials", opt.trials, "random trials for jacobiator, chainmap, ex4")->check(CLI::NonNegativeNumber);
  app.add_flag("--no-timing", no_timing, "report millis = 0 for byte-identical output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  opt.timing = !no_timing;

  Report rep = run_command(command, target, opt);
  std::string dumped = to_json(rep).dump(2) + "\n";
  if (json_path == "-") {
    std::cout << dumped;
  } else {
    std::cout << rep.check << ": " << to_string(rep.status) << "\n";
    if (!rep.message.empty()) std::cout << "  " << rep.message << "\n";
    for (const auto& r : rep.residuals) std::cout << "  " << r.where << " = " << r.expr << "\n";
    for (const auto& [k, v] : rep.values) std::cout << "  " << k << ": " << v << "\n";
    for (const auto& a : rep.assumptions) std::cout << "  assumption " << a << "\n";
    if (!json_path.empty()) {
      std::ofstream out(json_path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot write " << json_path << "\n";
        return 2;
      }
      out << dumped;
    }
  }
  return exit_code(rep);
}
