#include "fairvec/log.hpp"

#include <iostream>
#include <mutex>

namespace fairvec {
namespace {

std::mutex sink_mutex;
WarningSink &sink() {
  static WarningSink current;
  return current;
}

} // namespace

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (auto &s = sink())
    s(message);
  else
    std::cerr << "warning: " << message << '\n';
}

WarningSink set_warning_sink(WarningSink next) {
  std::lock_guard lock(sink_mutex);
  WarningSink previous = std::move(sink());
  sink() = std::move(next);
  return previous;
}

} // namespace fairvec
