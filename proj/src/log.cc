#include "softskill/log.h"

#include <atomic>
#include <iostream>

namespace softskill {
namespace {

std::atomic<bool> g_quiet{false};

}  // namespace

void set_quiet(bool quiet) { g_quiet = quiet; }
bool is_quiet() { return g_quiet; }

void log_warning(std::string_view message) {
  if (!g_quiet) std::cerr << "warning: " << message << '\n';
}

void log_info(std::string_view message) {
  if (!g_quiet) std::cerr << message << '\n';
}

}  // namespace softskill
