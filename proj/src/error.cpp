#include <iostream>
#include <mutex>

#include "rglab/error.hpp"

namespace rglab {

namespace {
std::mutex handler_mutex;
WarningHandler& handler() {
  static WarningHandler h = [](std::string_view msg) {
    std::cerr << "rglab warning: " << msg << '\n';
  };
  return h;
}
}  // namespace

void set_warning_handler(WarningHandler h) {
  std::lock_guard lock(handler_mutex);
  handler() = std::move(h);
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex);
  if (handler()) handler()(message);
}

}  // namespace rglab
