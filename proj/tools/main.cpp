#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gacomb/actions.hpp"
#include "gacomb/kernels.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace gacomb;

namespace {

enum Exit { kOk = 0, kCertificateFailure = 1, kValidation = 2, kIo = 3 };

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw scenario::IoError("cannot write " + path.string());
  out << text;
}

fs::path timings_path(const fs::path& report) {
  auto p = report;
  p.replace_extension(".timings.json");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified combinatorics of group actions: symmetry sets, energy, covering and BSG traces"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  std::string report_file;
  int threads = 0;
  std::optional<std::uint64_t> seed_override;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its report");
  auto* verify_cmd = app.add_subcommand("verify", "Re-check every certificate of a scenario report");
  auto* list_cmd = app.add_subcommand("list-actions", "List action descriptors and operations");
  auto* explain_cmd = app.add_subcommand("explain", "Describe a statement slug used in checker messages");
  std::string slug;
  explain_cmd->add_option("statement", slug, "Statement slug, e.g. symmetry-covering")->required();

  for (auto* cmd : {run_cmd, verify_cmd}) {
    cmd->add_option("--config", config, "Scenario JSON")->required();
    cmd->add_option("--out", out_dir, "Directory for report files");
    cmd->add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed-override", seed_override, "Added to every generator seed");
  }
  verify_cmd->add_option("--report", report_file, "Report to check (default: the path named by the scenario)");

  CLI11_PARSE(app, argc, argv);

  if (*list_cmd) {
    std::cout << "actions:\n";
    for (const auto& [kind, summary] : action_catalog()) std::cout << "  " << kind << "  " << summary << "\n";
    std::cout << "operations:\n";
    for (const auto& op : scenario::operations()) std::cout << "  " << op.name << "  " << op.summary << "\n";
    return kOk;
  }
  if (*explain_cmd) {
    for (const auto& [name, text] : scenario::statements()) {
      if (name == slug) {
        std::cout << name << ": " << text << "\n";
        return kOk;
      }
    }
    std::cerr << "unknown statement '" << slug << "'; known:";
    for (const auto& [name, text] : scenario::statements()) std::cerr << " " << name;
    std::cerr << "\n";
    return kValidation;
  }

  if (threads > 0) kernels::set_threads(threads);
  try {
    auto ctx = scenario::load(scenario::read_json_file(config), seed_override);
    if (*run_cmd) {
      auto result = scenario::run(ctx);
      auto path = scenario::report_path(ctx.config, out_dir);
      write_file(path, result.report.dump(2) + "\n");
      write_file(timings_path(path), result.timings.dump(2) + "\n");
      if (auto csv = scenario::csv_path(ctx.config, out_dir)) write_file(*csv, scenario::csv_summary(result.report));
      for (const auto& r : result.report.at("results")) {
        std::cout << r.at("id").get<std::string>() << ": " << r.at("status").get<std::string>() << "\n";
        for (const auto& f : r.at("failures")) std::cout << "  " << f.get<std::string>() << "\n";
        if (r.at("error").is_string()) std::cout << "  " << r.at("error").get<std::string>() << "\n";
      }
      std::cout << "report: " << path.string() << "\n";
      return result.ok ? kOk : kCertificateFailure;
    }
    fs::path path = report_file.empty() ? scenario::report_path(ctx.config, out_dir) : fs::path(report_file);
    auto verdict = scenario::verify(ctx, scenario::read_json_file(path));
    for (const auto& f : verdict.failures) std::cout << f << "\n";
    std::cout << (verdict.ok ? "verified: " : "FAILED: ") << path.string() << "\n";
    return verdict.ok ? kOk : kCertificateFailure;
  } catch (const scenario::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const scenario::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
