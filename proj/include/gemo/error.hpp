#pragma once

#include <stdexcept>
#include <string>

namespace gemo {

// Invalid parameter values or arguments outside an operation's domain.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Problems with input data (unparseable tokens, non-positive lifetimes, ...).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: quadrature non-convergence, tail underflow, singular
// systems, optimizer failure.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gemo
