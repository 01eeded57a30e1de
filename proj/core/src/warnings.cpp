#include "pyro/warnings.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace pyro {

namespace {
std::mutex g_mutex;
std::set<std::string> g_seen;
}  // namespace

void warn_once(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_mutex);
  if (g_seen.insert(message).second)
    std::cerr << "[pyro] warning: " << message << '\n';
}

void reset_warnings() {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_seen.clear();
}

}  // namespace pyro
