#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "livefund/llm/gateway.hpp"

namespace livefund::llm {

/// One scripted answer. Missing ticker/date match any value; when several
/// entries match, the one fixing more fields wins, then the later one.
struct ScriptEntry {
  std::string role;
  std::optional<Ticker> ticker;
  std::optional<Date> date;
  std::optional<std::string> response;
  int fail_times = 0;  // attempts that fail before `response` is served
};

enum class StubDefault {
  Neutral,  // Neutral signals, Hold decisions
  Follow,   // read the rendered prompt and answer along its cues
};

StubDefault parse_stub_default(std::string_view text);

struct StubOptions {
  StubDefault mode = StubDefault::Neutral;
  std::uint64_t seed = 0;
  /// Share of unscripted analyst / manager calls that fail on every attempt.
  double signal_failure_rate = 0.0;
  double decision_failure_rate = 0.0;
};

/// Deterministic offline provider. Stateless per call: the answer depends
/// only on (role, ticker, date, attempt, prompt), so it is safe and
/// reproducible under any call concurrency.
class ScriptedStub : public ChatProvider {
 public:
  explicit ScriptedStub(std::vector<ScriptEntry> script = {}, StubOptions options = {});

  /// JSON Lines: {"role", "ticker"?, "date"?, "response"?, "fail_times"?}.
  static std::vector<ScriptEntry> load_script(const std::filesystem::path& file);

  ChatReply send(const ChatRequest& request) override;

  /// Deterministic uniform draw in [0, 1) for a call key.
  static double draw(std::uint64_t seed, const CallContext& context);

 private:
  const ScriptEntry* lookup(const CallContext& context) const;
  std::string default_answer(const ChatRequest& request) const;

  std::map<std::string, std::vector<ScriptEntry>> by_role_;
  StubOptions options_;
};

}  // namespace livefund::llm
