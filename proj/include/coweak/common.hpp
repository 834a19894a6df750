/*
 * Copyright 2026 The coweak Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COWEAK_COMMON_HPP
#define COWEAK_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coweak {

/// Transition labels are small integers; 0 is the silent action.
using Label = std::uint32_t;
inline constexpr Label kTau = 0;

/// Comparison tolerance for real-valued weights and probabilities.
inline constexpr double kEps = 1e-9;
/// Default convergence threshold for numeric fixed-point iteration.
inline constexpr double kConvergence = 1e-12;
/// Values above this are treated as divergent and replaced by infinity.
inline constexpr double kInfinityCap = 1e15;

/**
 * Base class of every error raised by the library. `kind()` is a stable,
 * machine-readable tag (the CLI prints it verbatim).
 */
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string &what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Carriers, alphabets or quantales of two operands do not agree.
class MismatchError : public Error {
public:
    explicit MismatchError(const std::string &what) : Error("Mismatch", what) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string &what) : Error("Precondition", what) {}
};

class TooLargeError : public Error {
public:
    explicit TooLargeError(const std::string &what) : Error("TooLarge", what) {}
};

/// An exact fixed-point iteration did not reach two equal consecutive iterates.
class NonStabilizingError : public Error {
public:
    NonStabilizingError(const std::string &what, std::vector<std::string> cycle = {})
        : Error("NonStabilizing", what), cycle_(std::move(cycle)) {}

    /// States of a weight-accumulating silent cycle, when one was found.
    const std::vector<std::string> &cycle() const noexcept { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

/// A numeric iteration did not get its residual below tolerance in time.
class MaxIterationsError : public Error {
public:
    MaxIterationsError(const std::string &what, std::size_t iterations, double residual)
        : Error("MaxIterations", what), iterations_(iterations), residual_(residual) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

/// A timed system has a cycle of silent moves that accumulates positive delay.
class DelayCycleError : public Error {
public:
    DelayCycleError(const std::string &what, std::vector<std::string> cycle)
        : Error("DelayCycle", what), cycle_(std::move(cycle)) {}

    const std::vector<std::string> &cycle() const noexcept { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t line, std::size_t column)
        : Error("Syntax", what + " at line " + std::to_string(line) + ", column " +
                              std::to_string(column)),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed document with invalid content; `path()` names the field.
class SemanticError : public Error {
public:
    SemanticError(const std::string &path, const std::string &what)
        : Error("Semantic", path + ": " + what), path_(path) {}

    const std::string &path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace coweak

#endif // COWEAK_COMMON_HPP
