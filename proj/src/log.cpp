#include "dvs/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace dvs::log {

namespace {

Level from_env() {
  const char* v = std::getenv("DVS_LOG");
  if (v == nullptr) return Level::Quiet;
  const std::string s(v);
  if (s == "info") return Level::Info;
  if (s == "trace") return Level::Trace;
  return Level::Quiet;
}

std::atomic<int>& current() {
  static std::atomic<int> lvl{static_cast<int>(from_env())};
  return lvl;
}

void emit(std::string_view tag, std::string_view msg) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[dvs " << tag << "] " << msg << '\n';
}

}  // namespace

Level level() { return static_cast<Level>(current().load()); }

void set_level(Level l) { current().store(static_cast<int>(l)); }

void info(std::string_view msg) {
  if (level() >= Level::Info) emit("info", msg);
}

void trace(std::string_view msg) {
  if (level() >= Level::Trace) emit("trace", msg);
}

}  // namespace dvs::log
