#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qstar {

// Base class for all workbench failures so callers can catch one type.
struct qstar_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input text that does not parse; carries a byte offset into the source.
struct parse_error : qstar_error {
  std::size_t position;
  parse_error(const std::string& what, std::size_t pos)
      : qstar_error(what + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

// Operation not available in the active scalar mode (exact vs float).
struct mode_error : qstar_error {
  using qstar_error::qstar_error;
};

// Scalars or polynomials from different q-contexts / alphabets were mixed.
struct context_error : qstar_error {
  using qstar_error::qstar_error;
};

// A product exceeded the configured word-length cap.
struct degree_error : qstar_error {
  using qstar_error::qstar_error;
};

// Operator metadata violation: depth beyond validity, shape mismatch,
// dimension overflow guard.
struct operator_error : qstar_error {
  using qstar_error::qstar_error;
};

// Bad top-level configuration (CLI arguments, session setup).
struct config_error : qstar_error {
  using qstar_error::qstar_error;
};

}  // namespace qstar
