#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>
#include <spdlog/sinks/null_sink.h>
#include <spdlog/spdlog.h>

int main(int argc, char** argv) {
  // Library diagnostics go nowhere; the CLI keeps this logger once it exists.
  spdlog::set_default_logger(spdlog::null_logger_mt("livefund"));
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
