#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bpdl {

/** Bad input: shape mismatch, negative weight, violated model assumption.
 *  The CLI maps these to exit code 1. */
class validation_error : public std::invalid_argument {
public:
    validation_error(std::string code, const std::string& detail)
        : std::invalid_argument(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/** Numerical failure at run time: non-convergence, step-size collapse,
 *  truncation-leak budget blown, overflow. The CLI maps these to exit code 2. */
class numeric_error : public std::runtime_error {
public:
    numeric_error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace bpdl
