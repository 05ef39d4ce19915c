#ifndef G2K_ERRORS_HPP
#define G2K_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace g2k {

/// Malformed or out-of-contract input.  CLI exit code 2.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iteration failed to converge.  CLI exit code 3.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A residual certificate was violated.  CLI exit code 4.
struct certificate_error : std::runtime_error {
    explicit certificate_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace g2k

#endif
