#include "livefund/app/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include "livefund/app/config.hpp"
#include "livefund/app/fixture_validator.hpp"
#include "livefund/app/leaderboard.hpp"
#include "livefund/market/replay_provider.hpp"
#include "livefund/metrics/report.hpp"

namespace livefund::app {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LeakageViolation: return exit_code::kLeakage;
    case ErrorKind::CorruptLedger: return exit_code::kCorruptLedger;
    case ErrorKind::UnknownRun: return exit_code::kUnknownRun;
    case ErrorKind::MissingCredential: return exit_code::kMissingCredential;
    case ErrorKind::FixtureError:
    case ErrorKind::UnknownTicker:
    case ErrorKind::NoPriceAvailable:
    case ErrorKind::MissingPrice:
    case ErrorKind::MissingNextPrice:
    case ErrorKind::MisalignedSeries: return exit_code::kDataError;
    case ErrorKind::ProviderUnavailable: return exit_code::kProviderUnavailable;
    case ErrorKind::EmptyRun: return exit_code::kEmptyRun;
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownProviderKind:
    case ErrorKind::UnrecognizedAnalyst: return exit_code::kUsage;
    default: return exit_code::kInternal;
  }
}

namespace {

void setup_logging(const std::string& level) {
  if (!spdlog::get("livefund")) {
    auto logger = spdlog::stderr_color_mt("livefund");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  }
  const auto lvl = spdlog::level::from_str(level);
  if (lvl == spdlog::level::off && level != "off") {
    raise(ErrorKind::ConfigError, "unknown log level '" + level + "'");
  }
  spdlog::set_level(lvl);
}

/// Runs `body`, mapping errors to exit codes and a one-line message.
template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::kInternal;
  }
}

void write_file(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) raise(ErrorKind::StorageFailure, "cannot write " + file.string());
}

Json run_meta(const AppConfig& c) {
  Json universe = Json::array();
  for (const auto& t : c.run.universe) universe.push_back(t.str());
  Json analysts = Json::array();
  for (auto k : c.run.analyst_set) analysts.push_back(to_string(k));
  return Json{{"model", c.model_label},
              {"provider", c.run.model.provider_id},
              {"model_id", c.run.model.model_id},
              {"mode", c.mode},
              {"universe", universe},
              {"analysts", analysts},
              {"start_date", c.run.start_date.iso()},
              {"end_date", c.run.end_date.iso()}};
}

void print_summary(std::ostream& out, const workflow::RunSummary& s, const AppConfig& c, const fs::path& ledger_file) {
  auto rate = [](std::size_t valid, std::size_t total) {
    return total == 0 ? std::string("n/a") : fmt::format("{:.2f}%", 100.0 * valid / total);
  };
  out << "run " << s.run_id << " (" << c.mode << ", model " << c.model_label << ")\n";
  out << "days: " << s.days << "\n";
  out << "signals: " << s.signals << " (valid " << s.valid_signals << ", " << rate(s.valid_signals, s.signals) << ")\n";
  out << "decisions: " << s.decisions << " (valid " << s.valid_decisions << ", "
      << rate(s.valid_decisions, s.decisions) << ")\n";
  out << "final value: " << (s.final_value ? s.final_value->to_string() : std::string("n/a")) << "\n";
  out << fmt::format("llm calls: {}, attempts: {}, failures: {}, tokens: {}/{}, cost: {:.4f} USD\n", s.llm.calls,
                     s.llm.attempts, s.llm.failures, s.llm.prompt_tokens, s.llm.completion_tokens, s.llm.cost);
  out << "ledger: " << ledger_file.string() << "\n";
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err, const CliContext& ctx) {
  return guarded(err, [&] {
    AppConfig c = load_config(opts.config);
    if (opts.mode) {
      if (*opts.mode != "replay" && *opts.mode != "live") {
        raise(ErrorKind::ConfigError, "--mode must be replay or live");
      }
      c.mode = *opts.mode;
    }
    if (opts.run_id) c.run.run_id = *opts.run_id;
    if (opts.fixtures) c.data.fixture_dir = *opts.fixtures;
    if (opts.out) c.ledger_dir = *opts.out;
    setup_logging(c.log_level);
    c.run.validate();

    const bool live = c.mode == "live";
    c.data.kind = live ? c.live_provider : "replay";
    const market::MarketGateway gateway = market::register_provider(c.data, ctx.transport);
    for (const auto& t : c.run.universe) {
      if (!gateway.knows(t)) raise(ErrorKind::UnknownTicker, "ticker " + t.str() + " is not covered by the data provider");
    }

    llm::LlmGateway llm;
    register_chat_providers(c, llm, ctx.transport);

    ledger::Ledger ledger(c.ledger_dir);
    const bool exists = ledger.has_run(c.run.run_id);
    if (exists && !live && !opts.resume && !ledger.load_run(c.run.run_id).empty()) {
      raise(ErrorKind::ConfigError, "run '" + c.run.run_id + "' already has ledger entries under " +
                                        c.ledger_dir.string() + "; pass --resume or pick another --run-id");
    }
    if (!exists) ledger.register_run(c.run.run_id, run_meta(c));

    const workflow::Services services{gateway, llm, ledger};
    workflow::RunSummary summary;
    if (live) {
      const auto clock = market::SimulationClock::live(ctx.today);
      summary = workflow::run_live_day(c.run, clock, services);
    } else {
      summary = workflow::run_period(c.run, services, opts.resume);
    }
    print_summary(out, summary, c, ledger.run_file(c.run.run_id));
    return exit_code::kOk;
  });
}

namespace {

struct Evaluated {
  std::vector<metrics::MetricReport> reports;
  std::map<std::string, std::vector<ledger::ValuePoint>> series;
};

Evaluated evaluate(const MetricsOptions& opts) {
  if (opts.run_ids.empty()) raise(ErrorKind::ConfigError, "at least one --run-id is required");
  fs::path ledger_dir = "out";
  std::optional<fs::path> fixtures = opts.benchmark;
  if (opts.config) {
    const AppConfig c = load_config(*opts.config);
    ledger_dir = c.ledger_dir;
    if (!fixtures) fixtures = c.data.fixture_dir;
  }
  if (opts.ledger) ledger_dir = *opts.ledger;
  if (!fs::exists(ledger_dir / "runs")) raise(ErrorKind::UnknownRun, "no ledger directory at " + ledger_dir.string());
  const ledger::Ledger ledger(ledger_dir);

  std::optional<market::MarketGateway> bench_gateway;
  std::optional<Ticker> bench_ticker;
  if (fixtures && fs::exists(*fixtures / "manifest.json")) {
    auto provider = std::make_shared<market::ReplayProvider>(*fixtures);
    bench_ticker = provider->manifest().benchmark;
    if (bench_ticker) bench_gateway.emplace(provider);
  }
  if (opts.benchmark && !bench_ticker) {
    raise(ErrorKind::FixtureError, "benchmark fixtures at " + opts.benchmark->string() + " name no benchmark ticker");
  }

  Evaluated out;
  for (const auto& id : opts.run_ids) {
    if (!ledger.has_run(id)) raise(ErrorKind::UnknownRun, "no run named '" + id + "' under " + ledger_dir.string());
    const auto entries = ledger.load_run(id);
    const Json meta = ledger.run_meta(id);
    const std::string model = meta.is_object() && meta.contains("model") ? meta["model"].get<std::string>() : id;
    const auto points = ledger.daily_value_series(id);
    std::optional<metrics::ReturnSeries> market;
    if (bench_gateway) {
      std::vector<Date> dates;
      for (const auto& p : points) dates.push_back(p.date);
      try {
        market = metrics::benchmark_series(*bench_gateway, *bench_ticker, dates);
      } catch (const Error& e) {
        spdlog::warn("{}: benchmark unavailable: {}", id, e.what());
      }
    }
    out.reports.push_back(metrics::evaluate_run(id, model, entries, market));
    out.series[id] = points;
  }
  out.reports = rank(std::move(out.reports));
  return out;
}

std::string timestamp_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int cmd_metrics(const MetricsOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Evaluated ev = evaluate(opts);
    const std::string csv = leaderboard_csv(ev.reports);
    out << csv;
    if (opts.out) {
      write_file(*opts.out / "metrics.csv", csv);
      write_file(*opts.out / "metrics.json", leaderboard_json(ev.reports).dump(2) + "\n");
    }
    return exit_code::kOk;
  });
}

int cmd_report(const MetricsOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!opts.out) raise(ErrorKind::ConfigError, "report needs --out");
    const Evaluated ev = evaluate(opts);
    const fs::path dir = *opts.out;
    write_file(dir / "leaderboard.csv", leaderboard_csv(ev.reports));
    write_file(dir / "leaderboard.json", leaderboard_json(ev.reports).dump(2) + "\n");
    const std::optional<std::string> stamp =
        opts.no_timestamp ? std::nullopt : std::optional<std::string>(timestamp_now());
    write_file(dir / "leaderboard.html", leaderboard_html(ev.reports, stamp));
    for (const auto& [id, points] : ev.series) write_file(dir / "series" / (id + ".csv"), series_csv(points));
    out << "wrote leaderboard for " << ev.reports.size() << " run(s) to " << dir.string() << "\n";
    return exit_code::kOk;
  });
}

int cmd_validate_fixtures(const fs::path& dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const FixtureReport report = validate_fixtures(dir);
    for (const auto& f : report.files) {
      if (f.ok()) {
        out << "OK   " << f.file.string() << " (" << f.records << " records)\n";
      } else {
        for (const auto& p : f.problems) out << "FAIL " << f.file.string() << ": " << p << "\n";
      }
    }
    return report.ok() ? exit_code::kOk : exit_code::kFixturesInvalid;
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliContext& ctx) {
  CLI::App app{"Live-style evaluation engine for LLM-managed funds", "livefund"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  RunOptions run;
  std::string config, mode, run_id, fixtures, out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run an evaluation over the configured period (replay) or today (live)");
  run_cmd->add_option("--config", config, "TOML config file")->required();
  run_cmd->add_option("--mode", mode, "replay or live (overrides the config)");
  run_cmd->add_option("--run-id", run_id, "Run id (overrides the config)");
  run_cmd->add_option("--fixtures", fixtures, "Fixture directory (overrides the config)");
  run_cmd->add_option("--out", out_dir, "Ledger root directory (overrides the config)");
  run_cmd->add_flag("--resume", run.resume, "Continue a partially recorded run");

  MetricsOptions m;
  std::vector<std::string> run_ids;
  std::string ledger_dir, m_config, benchmark, m_out;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--run-id", run_ids, "Run id (repeatable)");
    cmd->add_option("--ledger", ledger_dir, "Ledger root directory");
    cmd->add_option("--config", m_config, "Config file supplying ledger and fixture paths");
    cmd->add_option("--benchmark", benchmark, "Fixture directory whose manifest names the benchmark");
  };
  auto* metrics_cmd = app.add_subcommand("metrics", "Compute metrics for recorded runs");
  add_common(metrics_cmd);
  metrics_cmd->add_option("--out", m_out, "Directory for metrics.csv and metrics.json");
  auto* report_cmd = app.add_subcommand("report", "Write leaderboard CSV/JSON/HTML and value series");
  add_common(report_cmd);
  report_cmd->add_option("--out", m_out, "Output directory");
  report_cmd->add_flag("--no-timestamp", m.no_timestamp, "Omit the generation time from the HTML");

  std::string fixture_dir;
  auto* validate_cmd = app.add_subcommand("validate-fixtures", "Check a fixture directory");
  validate_cmd->add_option("--fixtures", fixture_dir, "Fixture directory")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }
  try {
    setup_logging(log_level);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  }

  if (*run_cmd) {
    run.config = config;
    if (!mode.empty()) run.mode = mode;
    if (!run_id.empty()) run.run_id = run_id;
    if (!fixtures.empty()) run.fixtures = fixtures;
    if (!out_dir.empty()) run.out = out_dir;
    return cmd_run(run, out, err, ctx);
  }
  m.run_ids = run_ids;
  if (!ledger_dir.empty()) m.ledger = ledger_dir;
  if (!m_config.empty()) m.config = m_config;
  if (!benchmark.empty()) m.benchmark = benchmark;
  if (!m_out.empty()) m.out = m_out;
  for (CLI::App* cmd : {metrics_cmd, report_cmd}) {
    if (*cmd && run_ids.empty()) {
      err << "error: " << cmd->get_name() << " needs at least one --run-id\n" << cmd->help();
      return exit_code::kUsage;
    }
  }
  if (*metrics_cmd) return cmd_metrics(m, out, err);
  if (*report_cmd) return cmd_report(m, out, err);
  return cmd_validate_fixtures(fixture_dir, out, err);
}

}  // namespace livefund::app
