#include "livefund/llm/prompts.hpp"

#include <fmt/format.h>

#include "livefund/domain/error.hpp"

namespace livefund::llm {

namespace {

constexpr std::string_view kSignalInstruction =
    "You must provide your analysis as a structured output with the following fields:\n"
    "- signal: One of [\"Bullish\", \"Bearish\", \"Neutral\"]\n"
    "- justification: A brief explanation of your analysis\n"
    "\n"
    "Reply with one JSON object holding the keys \"signal\" and \"justification\".";

constexpr std::string_view kDecisionInstruction =
    "You must provide your decision as a structured output with the following fields:\n"
    "- action: One of [\"Buy\", \"Sell\", \"Hold\"]\n"
    "- shares: Number of shares to buy or sell, set 0 for hold\n"
    "- price: The current price of the ticker\n"
    "- justification: A brief explanation of your decision\n"
    "\n"
    "Reply with one JSON object holding the keys \"action\", \"shares\", \"price\" and \"justification\".";

constexpr std::string_view kTradableRules =
    "If the value of tradable shares is positive, you can buy more shares.\n"
    "If the value of tradable shares is negative, you can sell some shares.\n"
    "If the value of tradable shares is close to 0, you can hold.";

std::string header(const std::optional<Ticker>& ticker, Date date) {
  std::string out;
  if (ticker) out += "Ticker: " + ticker->str() + "\n";
  out += "Date: " + date.iso() + "\n\n";
  return out;
}

template <typename T>
const T& expect(AnalystKind kind, const AnalystPayload& payload) {
  if (const T* p = std::get_if<T>(&payload)) return *p;
  raise(ErrorKind::PayloadMismatch,
        "payload type does not match the " + std::string(to_string(kind)) + " analyst");
}

std::string news_list(const std::vector<market::NewsItem>& items) {
  if (items.empty()) return "No news items are available.\n";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& n = items[i];
    out += fmt::format("{}. [{}] {}", i + 1, n.date.iso(), n.headline);
    if (!n.source.empty()) out += " (" + n.source + ")";
    out += "\n";
    if (!n.summary.empty()) out += "   " + n.summary + "\n";
  }
  return out;
}

std::string optional_ratio(const std::optional<double>& v) {
  return v ? fmt::format("{:.2f}", *v) : std::string("n/a");
}

}  // namespace

std::string display_price(Price p) {
  std::string s = p.to_string();
  const auto dot = s.find('.');
  if (dot == std::string::npos) return s + ".00";
  while (s.size() > dot + 3 && s.back() == '0') s.pop_back();
  return s;
}

Prompt render_analyst_prompt(AnalystKind kind, const std::optional<Ticker>& ticker, Date date,
                             const AnalystPayload& payload) {
  const std::string name = ticker ? ticker->str() : std::string("the market");
  Prompt p;
  std::string body = header(ticker, date);

  switch (kind) {
    case AnalystKind::Technical: {
      const auto& s = expect<indicators::TechnicalSummary>(kind, payload);
      p.system = "You are a technical analyst. You study price and volume history for " + name +
                 " through several technical strategies and judge the short-term outlook.";
      body += "Readings computed from the daily price history:\n\n";
      body += "Price Trend Analysis: " + s.trend_text + "\n";
      body += "Mean Reversion: " + s.mean_reversion_text + "\n";
      body += "RSI: " + s.rsi_text + "\n";
      body += "Volatility: " + s.volatility_text + "\n";
      body += "Volume Analysis: " + s.volume_text + "\n";
      body += "Support and Resistance Levels: " + s.price_levels_text + "\n";
      break;
    }
    case AnalystKind::CompanyNews: {
      const auto& items = expect<std::vector<market::NewsItem>>(kind, payload);
      p.system = "You are a company news analyst. You read recent news about " + name +
                 " and judge how it is likely to move the stock.";
      body += "Recent company news, newest first:\n\n" + news_list(items);
      break;
    }
    case AnalystKind::Policy: {
      const auto& items = expect<std::vector<market::NewsItem>>(kind, payload);
      p.system = "You are a policy analyst. You read fiscal and monetary policy news and judge its effect on " +
                 name + ".";
      body += "Recent policy news, newest first:\n\n" + news_list(items);
      break;
    }
    case AnalystKind::Insider: {
      const auto& txs = expect<std::vector<market::InsiderTransaction>>(kind, payload);
      p.system = "You are an insider activity analyst. You review trades by company insiders of " + name +
                 " and judge what they signal.";
      body += "Recent insider transactions:\n\n";
      if (txs.empty()) body += "No insider transactions are available.\n";
      for (std::size_t i = 0; i < txs.size(); ++i) {
        const auto& t = txs[i];
        body += fmt::format("{}. [{}] {} ({}): {} {} shares at {}\n", i + 1, t.date.iso(), t.insider_name,
                            t.role, market::to_string(t.kind), t.shares, display_price(t.price));
      }
      break;
    }
    case AnalystKind::Fundamental: {
      const auto& snap = expect<std::optional<market::FundamentalsSnapshot>>(kind, payload);
      p.system = "You are a fundamental analyst. You review the latest reported financials of " + name +
                 " and judge its valuation and financial health.";
      body += "Latest fundamentals:\n\n";
      if (!snap) {
        body += "No fundamentals are available.\n";
      } else {
        body += "Period end: " + snap->period_end.iso() + "\n";
        body += "Revenue: " + snap->revenue.to_string() + "\n";
        body += "Net income: " + snap->net_income.to_string() + "\n";
        body += fmt::format("Gross margin: {:.2f}%\n", snap->gross_margin * 100.0);
        body += fmt::format("Net margin: {:.2f}%\n", snap->net_margin * 100.0);
        body += "P/E ratio: " + optional_ratio(snap->pe_ratio) + "\n";
        body += "P/B ratio: " + optional_ratio(snap->pb_ratio) + "\n";
      }
      break;
    }
    case AnalystKind::MacroEconomic: {
      const auto& inds = expect<std::vector<market::MacroIndicator>>(kind, payload);
      p.system = "You are a macroeconomic analyst. You review recent economic indicators and judge their effect on " +
                 name + ".";
      body += "Recent macroeconomic indicators:\n\n";
      if (inds.empty()) body += "No indicators are available.\n";
      for (const auto& m : inds) {
        body += fmt::format("- {} ({}): {:.2f} {}\n", m.name, m.date.iso(), m.value, m.unit);
      }
      break;
    }
  }
  body += "\n";
  body += kSignalInstruction;
  p.user = std::move(body);
  return p;
}

Prompt render_manager_prompt(const Ticker& ticker, const DecisionMemory& memory, Price current_price,
                             std::int64_t holding_shares, std::int64_t tradable_shares,
                             const std::vector<Signal>& signals) {
  if (!current_price.is_positive()) raise(ErrorKind::InvalidArgument, "current price must be positive");
  Prompt p;
  p.system =
      "You are a portfolio manager. You make the final trading decision for one ticker, guided by your "
      "recent decisions, the analyst signals and the position size suggested by risk control.";
  std::string body = "Ticker: " + ticker.str() + "\n\n";

  body += "Decision memory (most recent first):\n";
  if (memory.empty()) body += "no prior decisions\n";
  for (const auto& d : memory) {
    if (d.valid) {
      body += fmt::format("- {}: {} {} shares at {}. {}\n", d.date.iso(), to_string(d.action), d.shares,
                          display_price(d.price), d.justification);
    } else {
      body += fmt::format("- {}: Hold (no valid decision)\n", d.date.iso());
    }
  }

  body += "\nAnalyst signals for today:\n";
  bool any = false;
  for (const auto& s : signals) {
    if (!s.valid) continue;
    any = true;
    body += fmt::format("- {}: {}. {}\n", to_string(s.analyst), to_string(s.direction), s.justification);
  }
  if (!any) body += "no valid analyst signals\n";

  body += "\nCurrent Price: " + display_price(current_price) + "\n";
  body += fmt::format("Holding Shares: {}\n", holding_shares);
  body += fmt::format("Tradable Shares: {}\n\n", tradable_shares);
  body += kTradableRules;
  body += "\n\n";
  body += kDecisionInstruction;
  p.user = std::move(body);
  return p;
}

Prompt render_planner_prompt(const std::vector<Ticker>& universe, const Portfolio& portfolio,
                             const std::vector<AnalystKind>& available) {
  if (available.empty()) raise(ErrorKind::InvalidArgument, "planner needs at least one available analyst");
  Prompt p;
  p.system =
      "You are the planner of a fund's analyst team. Given the portfolio and the market, you choose which "
      "analysts should work today.";
  std::string body;
  body += "Date: " + portfolio.as_of.iso() + "\n";
  body += "Universe: ";
  for (std::size_t i = 0; i < universe.size(); ++i) body += (i ? ", " : "") + universe[i].str();
  body += "\nCash: " + portfolio.cash.to_string() + "\n";
  body += "Positions:\n";
  bool any = false;
  for (const auto& [t, pos] : portfolio.positions) {
    if (pos.shares == 0) continue;
    any = true;
    body += fmt::format("- {}: {} shares, cost basis {}\n", t.str(), pos.shares, display_price(pos.cost_basis));
  }
  if (!any) body += "- none\n";
  body += "\nAvailable analysts: ";
  for (std::size_t i = 0; i < available.size(); ++i) {
    body += (i ? ", " : "") + std::string(to_string(available[i]));
  }
  body +=
      "\n\nChoose a subset of the available analysts. You must provide your selection as a structured output "
      "with the following field:\n"
      "- analysts: list of analyst names taken from the available analysts\n"
      "\n"
      "Reply with one JSON object holding the key \"analysts\".";
  p.user = std::move(body);
  return p;
}

}  // namespace livefund::llm
