#include "livefund/app/leaderboard.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace livefund::app {

namespace {

std::string cell(const std::optional<double>& v, const char* spec) {
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> row_cells(const metrics::MetricReport& r) {
  return {r.model,
          fmt::format("{:+.2f}", r.cr),
          cell(r.cr_bnh, "{:+.2f}"),
          cell(r.sr, "{:.2f}"),
          fmt::format("{:.2f}", r.mdd),
          cell(r.wr, "{:.1f}"),
          cell(r.beta, "{:.2f}"),
          cell(r.alpha, "{:.2f}"),
          fmt::format("{:.4f}", r.validity.signal_rate()),
          fmt::format("{:.4f}", r.validity.decision_rate())};
}

}  // namespace

std::vector<metrics::MetricReport> rank(std::vector<metrics::MetricReport> reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    if (a.cr != b.cr) return a.cr > b.cr;
    if (a.model != b.model) return a.model < b.model;
    return a.run_id < b.run_id;
  });
  return reports;
}

std::string leaderboard_row(const metrics::MetricReport& r) {
  std::string out;
  const auto cells = row_cells(r);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  return out;
}

std::string leaderboard_csv(const std::vector<metrics::MetricReport>& ranked) {
  std::string out(kLeaderboardHeader);
  out += '\n';
  for (const auto& r : ranked) out += leaderboard_row(r) + '\n';
  return out;
}

Json leaderboard_json(const std::vector<metrics::MetricReport>& ranked) {
  Json rows = Json::array();
  std::size_t rank_no = 0;
  for (const auto& r : ranked) {
    Json j = metrics::to_json(r);
    j["rank"] = ++rank_no;
    rows.push_back(std::move(j));
  }
  return Json{{"leaderboard", std::move(rows)}};
}

std::string leaderboard_html(const std::vector<metrics::MetricReport>& ranked,
                             const std::optional<std::string>& generated) {
  std::string out =
      "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Fund leaderboard</title>\n"
      "<style>\n"
      "body{font-family:sans-serif;margin:2em}\n"
      "table{border-collapse:collapse}\n"
      "th,td{border:1px solid #999;padding:4px 10px;text-align:right}\n"
      "td:nth-child(2),th:nth-child(2){text-align:left}\n"
      "</style>\n</head>\n<body>\n";
  if (generated) out += "<!-- generated " + html_escape(*generated) + " -->\n";
  out += "<h1>Fund leaderboard</h1>\n<table>\n<thead>\n<tr><th>rank</th>";
  std::string_view header = kLeaderboardHeader;
  while (!header.empty()) {
    const auto comma = header.find(',');
    out += "<th>" + std::string(header.substr(0, comma)) + "</th>";
    header = comma == std::string_view::npos ? std::string_view{} : header.substr(comma + 1);
  }
  out += "</tr>\n</thead>\n<tbody>\n";
  std::size_t rank_no = 0;
  for (const auto& r : ranked) {
    out += "<tr><td>" + std::to_string(++rank_no) + "</td>";
    for (const auto& c : row_cells(r)) out += "<td>" + html_escape(c) + "</td>";
    out += "</tr>\n";
  }
  out += "</tbody>\n</table>\n</body>\n</html>\n";
  return out;
}

std::string series_csv(const std::vector<ledger::ValuePoint>& points) {
  std::string out = "date,total_value\n";
  for (const auto& p : points) out += p.date.iso() + "," + p.value.to_string() + "\n";
  return out;
}

}  // namespace livefund::app
