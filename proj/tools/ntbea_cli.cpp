#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include "ntbea/experiment.hpp"

namespace ex = ntbea::experiment;
using boost::property_tree::ptree;

namespace {

// Top-level config keys exposed as --flags (underscores become dashes).
const char* const kFields[] = {"game",         "optimizer",         "budget",          "trials",
                               "validation_games", "k",             "epsilon",         "default_mean",
                               "neighborhood_size", "mutation_prob", "flip_once",       "mutate_to_different",
                               "tuples",       "recommend",         "swcga_window",    "master_seed",
                               "fm_budget",    "threads"};

struct ConfigOptions {
  std::string file;
  std::map<std::string, std::string> fields;
  std::vector<std::string> sets;
};

void add_config_options(CLI::App* app, ConfigOptions& o) {
  app->add_option("--config", o.file, "INI config file")->check(CLI::ExistingFile);
  for (const char* key : kFields) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    app->add_option("--" + flag, o.fields[key], std::string("config key ") + key);
  }
  app->add_option("--set", o.sets, "section.key=value override, e.g. planetwars.max_ticks=300");
}

ex::ExperimentConfig build_config(const CLI::App* app, const ConfigOptions& o) {
  ptree tree;
  if (!o.file.empty()) {
    try {
      boost::property_tree::read_ini(o.file, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ntbea::ConfigError(std::string("config parse error: ") + e.what());
    }
  }
  for (const auto& [key, value] : o.fields) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (app->count("--" + flag) > 0) tree.put(key, value);
  }
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ntbea::ConfigError("--set expects key=value, got '" + s + "'");
    tree.put(s.substr(0, eq), s.substr(eq + 1));
  }
  auto cfg = ex::parse_config(tree);
  cfg.validate();
  return cfg;
}

ntbea::Point parse_point(const std::string& text) {
  ntbea::Point p;
  for (const auto& part : ex::detail::split(text, ',')) {
    p.push_back(ex::detail::parse_number<int>("point", part));
  }
  return p;
}

void print_summary(const std::string& label, const ex::Summary& s) {
  std::cout << label << ": " << s.mean << " +- " << s.std_err << " (" << s.n << " games"
            << (s.degenerate ? ", std_err undefined" : "") << ")\n";
}

int run(int argc, char** argv) {
  CLI::App app{"NTBEA parameter tuning for game-playing agents"};
  app.require_subcommand(1);

  ConfigOptions tune_opts, validate_opts, baseline_opts, report_opts;
  std::string outdir = "out";
  std::string point_text;
  int games = 0;
  std::uint64_t seed = 0;
  std::string log_path;
  std::string format = "csv";
  std::string report_out;

  auto* tune = app.add_subcommand("tune", "run a multi-trial tuning experiment");
  add_config_options(tune, tune_opts);
  tune->add_option("--out", outdir, "output directory")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "play fresh games with one parameter point");
  add_config_options(validate, validate_opts);
  validate->add_option("--point", point_text, "comma-separated value indices")->required();
  validate->add_option("--games", games, "games to play (default: validation_games)");
  validate->add_option("--seed", seed, "validation seed")->capture_default_str();

  auto* baseline = app.add_subcommand("baseline", "play games with a uniform-random agent");
  add_config_options(baseline, baseline_opts);
  baseline->add_option("--games", games, "games to play (default: validation_games)");
  baseline->add_option("--seed", seed, "seed")->capture_default_str();

  auto* report = app.add_subcommand("report", "N-tuple statistics rebuilt from a sample log");
  add_config_options(report, report_opts);
  report->add_option("--log", log_path, "sample log written by tune")->required()->check(CLI::ExistingFile);
  report->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}))->capture_default_str();
  report->add_option("--out", report_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (tune->parsed()) {
    const auto cfg = build_config(tune, tune_opts);
    const auto r = ex::run_experiment(cfg);
    ex::write_report(outdir, r);
    std::cout << ex::format_summary(r) << '\n';
    for (const auto& t : r.trials) {
      std::cout << "  trial " << t.trial << ": " << t.params << " -> " << t.validation_mean << " +- "
                << t.validation_std_err << '\n';
    }
  } else if (validate->parsed()) {
    const auto cfg = build_config(validate, validate_opts);
    const auto point = parse_point(point_text);
    if (point.size() != cfg.space.dimensions() || !cfg.space.contains(point)) {
      throw ntbea::ConfigError("point " + ntbea::to_string(point) + " is not in the search space");
    }
    const int n = games > 0 ? games : cfg.validation_games;
    std::cout << ex::describe(cfg, point) << '\n';
    print_summary("validation", ex::summarize(ex::validate_point(cfg, point, n, seed)));
  } else if (baseline->parsed()) {
    const auto cfg = build_config(baseline, baseline_opts);
    const int n = games > 0 ? games : cfg.validation_games;
    print_summary("random agent", ex::random_agent_baseline(cfg, n, seed));
  } else if (report->parsed()) {
    const auto cfg = build_config(report, report_opts);
    std::ifstream in(log_path);
    const auto model = ntbea::rebuild_system(cfg.space, cfg.tuples, ntbea::read_sample_log(in));
    std::ofstream file;
    if (!report_out.empty()) {
      file.open(report_out);
      if (!file) throw std::runtime_error("cannot write " + report_out);
    }
    std::ostream& os = report_out.empty() ? std::cout : file;
    if (format == "csv") {
      ntbea::write_report_csv(os, model.report());
    } else {
      ntbea::write_report_text(os, model.report());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ntbea::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
