#pragma once

#include <functional>
#include <string_view>

namespace fairvec {

using WarningSink = std::function<void(std::string_view)>;

// Emits a warning through the installed sink (stderr by default).
void warn(std::string_view message);

// Replaces the warning sink and returns the previous one. Passing an empty
// function restores the stderr default.
WarningSink set_warning_sink(WarningSink sink);

// Installs a sink for the lifetime of the guard.
class ScopedWarningSink {
public:
  explicit ScopedWarningSink(WarningSink sink) : previous_(set_warning_sink(std::move(sink))) {}
  ~ScopedWarningSink() { set_warning_sink(std::move(previous_)); }
  ScopedWarningSink(const ScopedWarningSink &) = delete;
  ScopedWarningSink &operator=(const ScopedWarningSink &) = delete;

private:
  WarningSink previous_;
};

} // namespace fairvec
