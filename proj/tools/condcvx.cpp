// Command-line front end: condcvx <command> <scenario.json> [flags]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "condcvx/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = condcvx::cli;
  cli::Options opt;
  std::string path = "-", output;
  std::vector<std::string> kv;

  CLI::App app{"Conditional convex analysis on finite atom spaces"};
  app.add_option("command", opt.command, "One of: basis, orthonormalize, decompose, separate, hahn-banach, "
                                         "conjugate, fenchel-moreau, subgrad, argmin, infconv, bw, cauchy, "
                                         "bounded-test, ri-test")
      ->required();
  app.add_option("scenario", path, "Scenario document ('-' reads stdin)");
  app.add_option("--tol", opt.tol, "Numerical tolerance")->capture_default_str();
  app.add_option("--seed", opt.seed, "Seed for probe-based verifications")->capture_default_str();
  app.add_option("--threads", opt.threads, "Worker threads for per-atom parallelism")->capture_default_str();
  app.add_option("--kind", opt.kind, "separate: strong | weak | proper")->capture_default_str();
  app.add_option("--depth", opt.depth, "bw: number of indices to extract")->capture_default_str();
  app.add_option("--slack", opt.slack, "bw: slack above the horizon liminf")->capture_default_str();
  app.add_option("--mode", opt.mode, "ri-test: relative | interior")->capture_default_str();
  app.add_flag("--strict", opt.strict, "Exit 2 when a failure set the command wants empty is not");
  app.add_option("--arg", kv, "Override a document argument, key=value (lists comma separated)");
  app.add_option("-o,--output", output, "Write the result document here instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--arg expects key=value, got '" << item << "'\n";
      return 1;
    }
    opt.args[item.substr(0, eq)] = item.substr(eq + 1);
  }

  std::stringstream text;
  if (path == "-") {
    text << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "cannot open " << path << "\n";
      return 1;
    }
    text << in.rdbuf();
  }

  const auto outcome = cli::run(opt, text.str());
  if (!outcome.message.empty()) std::cerr << outcome.message << "\n";
  if (!outcome.output.empty()) {
    if (output.empty()) {
      std::cout << outcome.output;
    } else {
      std::ofstream(output) << outcome.output;
    }
  }
  return outcome.exit_code;
}
