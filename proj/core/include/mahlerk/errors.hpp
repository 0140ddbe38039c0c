#ifndef MAHLERK_ERRORS_HPP
#define MAHLERK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mahlerk {

/// Malformed polynomial text. `position` is the byte offset into the input
/// at which parsing failed.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// An iteration failed to converge, a quadrature could not be set up, or a
/// required numeric precondition (nonzero polynomial, ...) was violated.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A root fell inside the ambiguity band [tol, 2*tol] around the unit circle
/// and cannot be classified as on- or off-circle without guessing.
class classification_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mahlerk

#endif
