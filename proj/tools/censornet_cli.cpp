// Command-line front end: run experiments, summarize record files, and run
// the built-in oracle suite.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime/numeric error,
// 3 I/O error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "censornet/censornet.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

unsigned worker_count() {
  if (const char* env = std::getenv("CENSORNET_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw censornet::invalid_config_error(
          "CENSORNET_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return 0;  // let run_experiment pick hardware concurrency
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  censornet::ExperimentConfig cfg = censornet::parse_config(config_path);
  if (!out_override.empty()) cfg.out_path = out_override;
  if (cfg.out_path.empty())
    throw censornet::invalid_config_error(
        "no output path: pass --out or set 'out' in the config");

  long printed_steps = -1;
  const auto progress = [&printed_steps](long done, long total) {
    const long steps = done * 20 / total;  // one line per 5%
    if (steps > printed_steps) {
      printed_steps = steps;
      std::fprintf(stderr, "run: %3ld%% (%ld/%ld)\n", steps * 5, done, total);
    }
  };

  const auto records = censornet::run_experiment(cfg, worker_count(), progress);

  // Stage through a .partial file so the final path never holds an
  // incomplete record set.
  const std::string staging = cfg.out_path + ".partial";
  std::ofstream out(staging, std::ios::binary);
  if (!out) throw censornet::io_error("cannot open output file: " + staging);
  censornet::write_records_csv(out, records);
  out.close();
  if (!out) throw censornet::io_error("failed writing output file: " + staging);
  if (std::rename(staging.c_str(), cfg.out_path.c_str()) != 0)
    throw censornet::io_error("cannot move " + staging + " to " + cfg.out_path);
  std::fprintf(stderr, "run: wrote %zu records to %s\n", records.size(),
               cfg.out_path.c_str());
  return kExitOk;
}

int cmd_summarize(const std::string& records_path, const std::string& out_path) {
  std::ifstream in(records_path, std::ios::binary);
  if (!in) throw censornet::io_error("cannot open records file: " + records_path);
  const auto records = censornet::read_records_csv(in);

  const censornet::Summary summary = censornet::summarize(records);
  const std::string body = censornet::to_json(summary).dump(2) + "\n";
  if (out_path == "-") {
    std::cout << body;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw censornet::io_error("cannot open output file: " + out_path);
  out << body;
  out.close();
  if (!out) throw censornet::io_error("failed writing output file: " + out_path);
  return kExitOk;
}

int cmd_oracle() {
  const auto checks = censornet::run_oracle_suite();
  bool all_pass = true;
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    std::printf("[%s] %-42s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.c_str());
  }
  if (!all_pass) {
    std::fprintf(stderr, "oracle: some checks failed\n");
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"censornet: outdegree-censoring bias simulator"};
  app.set_version_flag("--version",
                       std::string("censornet ") + censornet::kVersion);
  app.require_subcommand(0, 1);

  std::string config_path, run_out;
  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", run_out, "records CSV output path");

  std::string records_path, summary_out;
  CLI::App* summarize =
      app.add_subcommand("summarize", "summarize a records CSV into JSON");
  summarize->add_option("--records", records_path, "records CSV input path")
      ->required();
  summarize->add_option("--out", summary_out, "summary JSON output path ('-' for stdout)")
      ->required();

  CLI::App* oracle = app.add_subcommand("oracle", "run built-in numeric cross-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, run_out);
    if (summarize->parsed()) return cmd_summarize(records_path, summary_out);
    if (oracle->parsed()) return cmd_oracle();
    std::cerr << app.help();
    return kExitConfig;
  } catch (const censornet::invalid_config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const censornet::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
