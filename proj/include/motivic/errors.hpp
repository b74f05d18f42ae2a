#ifndef MOTIVIC_ERRORS_HPP
#define MOTIVIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace motivic {

/// Bad input data: failed invariants, unknown symbols, malformed documents.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// A substitution or specialization produced a divergent series
/// (an atom collapsed to zero, or an infinite fiber was detected).
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// Text input rejected by a parser; carries a 1-based column position.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t column)
        : std::runtime_error(what + " at column " + std::to_string(column)), column_(column) {}

    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

} // namespace motivic

#endif
