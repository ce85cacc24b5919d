#ifndef VORTEXFLOW_ERRORS_HPP
#define VORTEXFLOW_ERRORS_HPP

#include <stdexcept>

namespace vortexflow {

/// Neumann data whose mean is not zero within tolerance.
class CompatibilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Two vortices coincide, so the pair interaction is singular.
class CollapseError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// An iterative solver failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration (bad JSON field, inconsistent sizes, ...).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace vortexflow

#endif
