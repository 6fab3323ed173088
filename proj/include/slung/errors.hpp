#pragma once

#include <stdexcept>
#include <string>

namespace slung {

/// Cable geometry degenerate: |sin(phi_0 - phi_1)| at or below the guard,
/// tension (and anything built on it) is undefined.
struct SingularConfiguration : std::runtime_error {
  explicit SingularConfiguration(const std::string& what)
      : std::runtime_error(what) {}
};

/// A state, covariance, or derivative left the reals.
struct NonFinite : std::runtime_error {
  explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

/// An argument is outside its documented domain.
struct InvalidRange : std::runtime_error {
  explicit InvalidRange(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solve exhausted its iteration budget.
struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// A metrics window clipped to the trace contains no samples.
struct EmptyWindow : std::runtime_error {
  explicit EmptyWindow(const std::string& what) : std::runtime_error(what) {}
};

/// Config file rejected; message carries the section.key path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slung
