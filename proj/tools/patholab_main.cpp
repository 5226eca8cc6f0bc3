#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "patholab/corpus.hpp"

namespace {

using namespace patholab;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Output {
  std::string format = "text";
  std::string path;

  void emit(const nlohmann::ordered_json& json, const std::string& text) const {
    std::string body = format == "json" ? json.dump(2) + "\n" : text;
    if (path.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
  }
};

int classify_command(const std::string& formula, const corpus::Config& config, const Output& out) {
  corpus::Report r = corpus::classify_text(formula, config);
  auto entry = corpus::to_json(r, true);
  auto timing = entry["timing"];
  entry.erase("timing");
  nlohmann::ordered_json json{
      {"command", "classify"}, {"config", corpus::config_json(config)}, {"entry", entry}, {"timing", timing}};
  out.emit(json, corpus::to_text(r));
  if (r.error) {
    std::cerr << "patholab: " << r.error->kind << ": " << r.error->message << "\n";
    return kUsage;
  }
  return kOk;
}

int run_command(const std::string& path, bool fail_on_error, const corpus::Config& config, const Output& out) {
  corpus::RunReport run = corpus::run_corpus(corpus::load_corpus(path), config);
  out.emit(corpus::to_json(run, config), corpus::to_text(run));
  if (run.mismatches) return kFailure;
  if (fail_on_error && run.errors) return kFailure;
  return kOk;
}

int audit_command(const std::string& path, const corpus::Config& config, const Output& out) {
  corpus::AuditReport audit = corpus::audit_1jt(corpus::load_corpus(path), config);
  out.emit(corpus::to_json(audit, config), corpus::to_text(audit));
  return audit.passed ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classifies set-builder predicates of naive set theory as pathological or not."};
  app.name("patholab");
  app.require_subcommand(0, 1);
  app.fallthrough();

  corpus::Config config;
  Output out;
  std::string seed_path;
  app.add_option("--refute-depth", config.budget.max_instantiation_depth, "Maximum ground-term depth")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--refute-steps", config.budget.max_steps, "Maximum number of ground clause instances")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--model-size", config.model_size, "Largest universe for the model search")
      ->capture_default_str()
      ->check(CLI::Range(1, 8));
  app.add_option("--format", out.format, "Report format")->capture_default_str()->check(CLI::IsMember({"json", "text"}));
  app.add_option("-o,--output", out.path, "Write the report to a file instead of stdout");
  app.add_option("--seed-corpus", seed_path, "Write the bundled corpus of classics to a file");

  std::string formula;
  auto* classify = app.add_subcommand("classify", "Classify one formula");
  classify->add_option("formula", formula, "Formula text")->required();

  std::string corpus_path;
  bool fail_on_error = false;
  auto* run = app.add_subcommand("run", "Classify every entry of a corpus file");
  run->add_option("corpus", corpus_path, "Corpus file")->required();
  run->add_flag("--fail-on-error", fail_on_error, "Exit with status 1 if any entry cannot be classified");

  auto* audit = app.add_subcommand("audit-1jt", "Check that no entry and its negation are both pathological");
  audit->add_option("corpus", corpus_path, "Corpus file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!seed_path.empty()) {
      std::ofstream seed(seed_path, std::ios::binary);
      if (!seed) throw std::runtime_error("cannot write " + seed_path);
      seed << corpus::bundled_corpus();
      std::cerr << "wrote bundled corpus to " << seed_path << "\n";
    }
    if (*classify) return classify_command(formula, config, out);
    if (*run) return run_command(corpus_path, fail_on_error, config, out);
    if (*audit) return audit_command(corpus_path, config, out);
    if (seed_path.empty()) {
      std::cerr << app.help();
      return kUsage;
    }
    return kOk;
  } catch (const std::runtime_error& e) {
    std::cerr << "patholab: " << e.what() << "\n";
    return kUsage;
  }
}
