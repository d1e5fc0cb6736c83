// errors.hpp
#pragma once
#include <stdexcept>
#include <string>
#include <utility>

namespace optistop {

// Argument outside an operation's mathematical domain (u <= 0 in a quantile,
// k > n in an order statistic, n <= 0 in a cost, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A model parameter failed validation. Carries the offending field name so the
// service layer can report {"error": ..., "field": ...}.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// The expected maximum (and hence the gain) is infinite: Pareto with alpha <= 1.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The conditional return density is a point mass when the error spread is 0.
class DegenerateModelError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace optistop
