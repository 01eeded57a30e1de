#pragma once

#include <string>

namespace pyro {

// Emits one line per distinct message to stderr; subsequent repeats are
// suppressed so correlation-validity warnings do not flood solver runs.
void warn_once(const std::string& message);

// Clears the suppression set (used by tests).
void reset_warnings();

}  // namespace pyro
