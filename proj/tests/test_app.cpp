#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "livefund/app/commands.hpp"
#include "livefund/app/config.hpp"
#include "livefund/app/fixture_validator.hpp"
#include "livefund/app/leaderboard.hpp"
#include "support/check_kind.hpp"
#include "support/helpers.hpp"

using namespace livefund;
using namespace livefund::app;
using livefund::testing::bundled_fixtures;
using livefund::testing::read_file;
using livefund::testing::read_lines;
using livefund::testing::source_dir;
using livefund::testing::TempDir;
using livefund::testing::write_file;
using livefund::testing::write_lines;

namespace fs = std::filesystem;

namespace {

struct Cli {
  std::ostringstream out, err;
  int code = -1;
  explicit Cli(const std::vector<std::string>& args) { code = run_cli(args, out, err); }
};

std::string config_text(const std::string& run_id, const fs::path& ledger, const std::string& universe,
                        const std::string& mode = "follow") {
  return "[run]\nrun_id = \"" + run_id + "\"\nmodel_label = \"" + run_id + "\"\nuniverse = [" + universe +
         "]\nstart_date = 2025-03-17\nend_date = 2025-04-17\nanalysts = [\"Technical\", \"Policy\"]\n\n"
         "[model]\nprovider = \"stub\"\nmodel_id = \"m\"\n\n[data]\nfixtures = \"" +
         bundled_fixtures().generic_string() + "\"\nledger_dir = \"" + ledger.generic_string() +
         "\"\n\n[providers.stub]\nkind = \"scripted\"\ndefault = \"" + mode + "\"\n\n[logging]\nlevel = \"off\"\n";
}

const std::string kFive = R"("AAPL", "AXP", "BAC", "KO", "CVX")";

std::vector<std::string> split(const std::string& row) {
  std::vector<std::string> cells;
  std::stringstream ss(row);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!row.empty() && row.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = load_config(source_dir() / "configs" / "stub_follow.toml");
  CHECK(c.run.run_id == "stub-follow");
  CHECK(c.run.universe.size() == 5);
  CHECK(c.run.initial_cash == Money::whole(100000));
  CHECK(c.run.analyst_set.size() == 4);
  CHECK(c.run.risk.max_weight == 0.30);
  CHECK(c.providers.at("stub").kind == "scripted");
  CHECK(fs::equivalent(c.data.fixture_dir, bundled_fixtures()));

  const std::string bad = "[run]\nrun_id = \"x\"\nuniverse = [\"KO\"]\nstart_date = 2025-03-17\n"
                          "end_date = 2025-04-17\nanalysts = [\"Policy\"]\ncolour = \"blue\"\n";
  try {
    parse_config(bad, "cfg.toml");
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    const std::string msg = e.what();
    CHECK(msg.find("cfg.toml:7:") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);
  }
  CHECK_KIND(parse_config("[run\n", "x.toml"), ErrorKind::ConfigError);
  CHECK_KIND(parse_config("[run]\nparallelism = \"four\"\n", "x.toml"), ErrorKind::ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::LeakageViolation) == exit_code::kLeakage);
  CHECK(exit_code_for(ErrorKind::CorruptLedger) == exit_code::kCorruptLedger);
  CHECK(exit_code_for(ErrorKind::UnknownRun) == exit_code::kUnknownRun);
  CHECK(exit_code_for(ErrorKind::MissingCredential) == exit_code::kMissingCredential);
  CHECK(exit_code_for(ErrorKind::ConfigError) == exit_code::kUsage);
  CHECK(exit_code_for(ErrorKind::UnknownTicker) == exit_code::kDataError);
  CHECK(exit_code_for(ErrorKind::EmptyRun) == exit_code::kEmptyRun);

  CHECK(Cli({}).code == exit_code::kUsage);
  CHECK(Cli({"run"}).code == exit_code::kUsage);
  CHECK(Cli({"frobnicate"}).code == exit_code::kUsage);
  Cli m({"metrics"});
  CHECK(m.code == exit_code::kUsage);
  CHECK(m.err.str().find("--run-id") != std::string::npos);
  CHECK(Cli({"report", "--out", "/tmp/x"}).code == exit_code::kUsage);
  CHECK(Cli({"run", "--config", "/nonexistent.toml"}).code == exit_code::kUsage);
}

TEST_CASE("run command failures") {
  TempDir dir;
  write_file(dir / "ticker.toml", config_text("t", dir / "out", R"("AAPL", "MSFT")"));
  Cli t({"run", "--config", (dir / "ticker.toml").string()});
  CHECK(t.code == exit_code::kDataError);
  CHECK(t.err.str().find("MSFT") != std::string::npos);

  ::unsetenv("ALPHAVANTAGE_API_KEY");
  ::unsetenv("OPENAI_API_KEY");
  Cli live({"run", "--config", (source_dir() / "configs" / "live_example.toml").string(), "--out",
            (dir / "live").string()});
  CHECK(live.code == exit_code::kMissingCredential);

  write_file(dir / "ok.toml", config_text("ok", dir / "out", kFive));
  Cli unknown({"metrics", "--ledger", (dir / "out").string(), "--run-id", "nope"});
  CHECK(unknown.code == exit_code::kUnknownRun);
}

TEST_CASE("run, metrics and report") {
  TempDir dir;
  const fs::path ledger = dir / "out";
  write_file(dir / "follow.toml", config_text("follow", ledger, kFive));
  write_file(dir / "neutral.toml", config_text("neutral", ledger, kFive, "neutral"));
  Cli a({"run", "--config", (dir / "follow.toml").string()});
  REQUIRE(a.code == 0);
  CHECK(a.out.str().find("days: 24") != std::string::npos);
  REQUIRE(Cli({"run", "--config", (dir / "neutral.toml").string()}).code == 0);

  Cli m({"metrics", "--ledger", ledger.string(), "--benchmark", bundled_fixtures().string(), "--run-id", "neutral",
         "--run-id", "follow", "--out", (dir / "m").string()});
  REQUIRE(m.code == 0);
  const auto csv = read_lines(dir / "m" / "metrics.csv");
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == kLeaderboardHeader);

  const std::vector<std::string> report_args{"report",   "--ledger", ledger.string(),       "--benchmark",
                                             bundled_fixtures().string(), "--run-id", "neutral", "--run-id",
                                             "follow", "--out",    (dir / "r").string(), "--no-timestamp"};
  REQUIRE(Cli(report_args).code == 0);
  const auto rows = read_lines(dir / "r" / "leaderboard.csv");
  REQUIRE(rows.size() == 3);
  const auto first = split(rows[1]);
  const auto second = split(rows[2]);
  REQUIRE(first.size() == 10);
  REQUIRE(second.size() == 10);
  CHECK(std::stod(first[1]) >= std::stod(second[1]));
  for (const auto& row : {first, second}) {
    if (row[0] == "neutral") {
      CHECK(std::stod(row[1]) == 0.0);
      CHECK(row[5].empty());
    } else {
      CHECK_FALSE(row[5].empty());
    }
  }

  const std::string html = read_file(dir / "r" / "leaderboard.html");
  std::size_t data_rows = 0;
  for (auto pos = html.find("<tr><td>"); pos != std::string::npos; pos = html.find("<tr><td>", pos + 1)) {
    ++data_rows;
  }
  CHECK(data_rows == 2);
  CHECK(html.find("<script") == std::string::npos);
  const Json j = Json::parse(read_file(dir / "r" / "leaderboard.json"));
  CHECK(j["leaderboard"].size() == 2);
  CHECK(j["leaderboard"][0]["rank"] == 1);
  CHECK(read_lines(dir / "r" / "series" / "follow.csv").size() == 25);

  // Same inputs, same bytes.
  const std::string before = read_file(dir / "r" / "leaderboard.csv") + html;
  REQUIRE(Cli(report_args).code == 0);
  CHECK(read_file(dir / "r" / "leaderboard.csv") + read_file(dir / "r" / "leaderboard.html") == before);

  auto one = report_args;
  one.erase(one.begin() + 5, one.begin() + 7);
  one[one.size() - 2] = (dir / "one").string();
  REQUIRE(Cli(one).code == 0);
  CHECK(read_lines(dir / "one" / "leaderboard.csv").size() == 2);
}

TEST_CASE("leaderboard ranking") {
  std::vector<metrics::MetricReport> reports(3);
  reports[0].model = "b";
  reports[0].cr = -1.0;
  reports[1].model = "a";
  reports[1].cr = 2.5;
  reports[2].model = "c";
  reports[2].cr = 2.5;
  const auto ranked = rank(reports);
  CHECK(ranked[0].model == "a");
  CHECK(ranked[1].model == "c");
  CHECK(ranked[2].model == "b");
  const auto row = split(leaderboard_row(ranked[2]));
  REQUIRE(row.size() == 10);
  CHECK(row[0] == "b");
  CHECK(row[2].empty());
  CHECK(row[3].empty());
  CHECK(series_csv({{Date(2025, 3, 17), Money::whole(100000)}}) == "date,total_value\n2025-03-17,100000.00\n");
}

TEST_CASE("fixture validation") {
  std::ostringstream out, err;
  CHECK(cmd_validate_fixtures(bundled_fixtures(), out, err) == 0);
  CHECK(validate_fixtures(bundled_fixtures()).ok());

  TempDir dir;
  fs::copy(bundled_fixtures(), dir.path(), fs::copy_options::recursive);
  const fs::path ko = dir / "KO" / "ohlcv.jsonl";
  auto lines = read_lines(ko);
  REQUIRE(lines.size() > 10);

  SUBCASE("dates out of order") {
    std::swap(lines[3], lines[4]);
    write_lines(ko, lines);
    std::ostringstream o, e;
    CHECK(cmd_validate_fixtures(dir.path(), o, e) == exit_code::kFixturesInvalid);
    CHECK((o.str() + e.str()).find("KO") != std::string::npos);
  }
  SUBCASE("low above high") {
    Json bar = Json::parse(lines[5]);
    bar["low"] = bar["high"].get<double>() + 1.0;
    lines[5] = bar.dump();
    write_lines(ko, lines);
    const auto report = validate_fixtures(dir.path());
    CHECK_FALSE(report.ok());
    bool found = false;
    for (const auto& f : report.files) {
      for (const auto& p : f.problems) found |= p.rfind("line 6", 0) == 0;
    }
    CHECK(found);
  }
  SUBCASE("duplicate date") {
    lines.insert(lines.begin() + 2, lines[2]);
    write_lines(ko, lines);
    CHECK_FALSE(validate_fixtures(dir.path()).ok());
  }
  SUBCASE("ticker missing from disk") {
    fs::remove_all(dir / "AXP");
    CHECK_FALSE(validate_fixtures(dir.path()).ok());
  }
}
