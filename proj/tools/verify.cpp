// verify: replay the N=6 / N=10 proof chains against the shipped data.
//
// Exit codes: 0 every step passed (TrustedInput counts as passing),
// 1 at least one step failed, 2 data or configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <semistable/cft_data.hpp>
#include <semistable/odlyzko.hpp>
#include <semistable/replay.hpp>
#include <semistable/scripts.hpp>

namespace fs = std::filesystem;
using namespace semistable;

namespace {

ProofScript load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open script " + path);
  try {
    return script_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("script " + path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replay the semistable-reduction proof chains"};
  std::string case_id = "all";
  std::string data_dir = SEMISTABLE_DATA_DIR;
  std::string odlyzko_path;
  std::string format = "text";
  std::string script_path;
  unsigned precision = 64;
  std::uint64_t seed = 1;
  bool export_script = false;

  app.add_option("--case", case_id, "n6, n10 or all")->check(CLI::IsMember({"n6", "n10", "all"}));
  app.add_option("--data-dir", data_dir, "directory holding fields.json, rayclass.json, unit_images.json, splitting.json");
  app.add_option("--odlyzko", odlyzko_path, "GRH bound table (default: <data-dir>/odlyzko_grh.csv)");
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--precision", precision, "starting MPFR precision in bits")->check(CLI::Range(16u, 1u << 20));
  app.add_option("--seed", seed, "seed for randomized replays");
  app.add_option("--script", script_path, "run a JSON proof script instead of the compiled-in chain");
  app.add_flag("--export-script", export_script, "print the selected compiled-in chain as JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::vector<ProofScript> scripts;
    if (!script_path.empty()) {
      scripts.push_back(load_script(script_path));
    } else if (case_id == "all") {
      scripts = {build_script_n6(), build_script_n10()};
    } else {
      scripts.push_back(build_script(case_id));
    }

    if (export_script) {
      if (scripts.size() == 1) {
        std::cout << script_to_json(scripts[0]).dump(2) << '\n';
      } else {
        nlohmann::json all = nlohmann::json::array();
        for (const auto& s : scripts) all.push_back(script_to_json(s));
        std::cout << all.dump(2) << '\n';
      }
      return 0;
    }

    if (odlyzko_path.empty()) odlyzko_path = (fs::path(data_dir) / "odlyzko_grh.csv").string();
    const OdlyzkoTable table = OdlyzkoTable::load_file(odlyzko_path);
    const CertifiedData data = load_certified_data(data_dir);

    Precision prec;
    prec.start_bits = static_cast<mpfr_prec_t>(precision);
    const RunContext ctx{data, table, seed, prec};

    std::vector<Report> reports;
    for (const auto& s : scripts) reports.push_back(run_script(s, ctx));
    const Report report = reports.size() == 1 ? reports[0] : merge_reports(case_id, reports);

    if (format == "json") {
      std::cout << report_to_json(report).dump(2) << '\n';
    } else {
      std::cout << render_text(report);
    }
    return report.passed() ? 0 : 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
}
