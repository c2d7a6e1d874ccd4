#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wmd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateToken : public Error {
public:
    explicit DuplicateToken(std::string token)
        : Error("duplicate token '" + token + "'"), token_(std::move(token)) {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

/// A document (or query) with no usable entries.
class EmptyDocument : public Error {
public:
    explicit EmptyDocument(std::size_t doc)
        : Error("document " + std::to_string(doc) + " has no entries"), doc_(doc) {}

    std::size_t doc() const noexcept { return doc_; }

private:
    std::size_t doc_;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A zero, negative or non-finite intermediate in a scaling kernel.
class NumericalBreakdown : public Error {
public:
    explicit NumericalBreakdown(std::size_t entry)
        : Error("numerical breakdown at sparse entry " + std::to_string(entry)), entry_(entry) {}

    std::size_t entry() const noexcept { return entry_; }

private:
    std::size_t entry_;
};

/// exp(-lambda * M) underflowed for an entire query row.
class LambdaTooLarge : public Error {
public:
    explicit LambdaTooLarge(std::size_t query_row)
        : Error("kernel row " + std::to_string(query_row) + " underflows; lambda is too large"),
          row_(query_row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Results differed between worker counts that must agree bitwise.
class DeterminismViolation : public Error {
public:
    using Error::Error;
};

} // namespace wmd
