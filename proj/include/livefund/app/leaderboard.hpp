#pragma once

#include <optional>
#include <string>
#include <vector>

#include "livefund/ledger/ledger.hpp"
#include "livefund/metrics/report.hpp"

namespace livefund::app {

inline constexpr std::string_view kLeaderboardHeader =
    "model,cr_pct,cr_bnh_pct,sr,mdd_pct,wr_pct,beta,alpha,signal_validity,decision_validity";

/// Best cumulative return first; ties by model, then run id.
std::vector<metrics::MetricReport> rank(std::vector<metrics::MetricReport> reports);

/// One CSV row in header order; absent metrics are empty cells.
std::string leaderboard_row(const metrics::MetricReport& r);
std::string leaderboard_csv(const std::vector<metrics::MetricReport>& ranked);
Json leaderboard_json(const std::vector<metrics::MetricReport>& ranked);
/// Static table. `generated` adds a timestamp comment.
std::string leaderboard_html(const std::vector<metrics::MetricReport>& ranked,
                             const std::optional<std::string>& generated);
/// "date,total_value" lines.
std::string series_csv(const std::vector<ledger::ValuePoint>& points);

}  // namespace livefund::app
