#ifndef MVRANK_ERRORS_HPP
#define MVRANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mvrank {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NonFiniteInput : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of a functional (negative quadrant
/// entry, colatitude outside [0, pi], 2 - phi^2 <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A parametric family was instantiated with parameters outside their range.
class InvalidSpec : public Error {
public:
    using Error::Error;
};

/// Input points do not determine the requested object (rank-deficient conic
/// design matrix, dependent plane basis).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

class NotIsometric : public Error {
public:
    using Error::Error;
};

class NotStrictlyConvex : public Error {
public:
    using Error::Error;
};

class RankAmbiguity : public Error {
public:
    using Error::Error;
};

class ArclengthViolation : public Error {
public:
    ArclengthViolation(const std::string& what, int component)
        : Error(what), component_(component) {}
    int component() const noexcept { return component_; }

private:
    int component_;
};

class SearchExhausted : public Error {
public:
    SearchExhausted(const std::string& what, long long largest_tried)
        : Error(what), largest_tried_(largest_tried) {}
    long long largest_tried() const noexcept { return largest_tried_; }

private:
    long long largest_tried_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace mvrank

#endif
