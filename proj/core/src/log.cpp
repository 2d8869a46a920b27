#include "tracklist/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace tracklist::log {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

const char* level_name(Level level) {
  switch (level) {
    case Level::kDebug: return "debug";
    case Level::kInfo: return "info";
    case Level::kWarning: return "warning";
    case Level::kError: return "error";
  }
  return "?";
}

Sink& current_sink() {
  static Sink sink = [](Level level, std::string_view msg) {
    std::cerr << "[tracklist " << level_name(level) << "] " << msg << '\n';
  };
  return sink;
}

std::atomic<Level> g_min_level{Level::kWarning};

}  // namespace

Sink set_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  Sink previous = std::move(current_sink());
  current_sink() = std::move(sink);
  return previous;
}

void set_min_level(Level level) { g_min_level = level; }

void write(Level level, std::string_view message) {
  if (level < g_min_level.load()) return;
  std::lock_guard lock(sink_mutex());
  if (current_sink()) current_sink()(level, message);
}

}  // namespace tracklist::log
