#pragma once

#include <stdexcept>
#include <string>

namespace qhj {

// Exit-code classes used by the CLI: validation -> 1, numerical -> 2, io -> 3.

struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation outside the well interior [-q, q].
struct domain_error : numerical_error {
    explicit domain_error(const std::string& what) : numerical_error(what) {}
};

// Time argument outside the validity window of a wall-band formula.
struct window_error : numerical_error {
    explicit window_error(const std::string& what) : numerical_error(what) {}
};

// Negative radicand or vanishing denominator in a closed-form branch.
struct degeneracy_error : numerical_error {
    explicit degeneracy_error(const std::string& what) : numerical_error(what) {}
};

struct quadrature_error : numerical_error {
    explicit quadrature_error(const std::string& what) : numerical_error(what) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qhj
