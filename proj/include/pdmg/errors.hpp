#ifndef PDMG_ERRORS_HPP
#define PDMG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdmg {

/// Root of the library's exception hierarchy. The three direct subclasses
/// map onto the CLI exit codes (2, 3 and 4 respectively).
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: lexicon syntax, bad item references, bad JSON tables.
class InputError : public Error
{
public:
    using Error::Error;
};

class LexiconError : public InputError
{
public:
    LexiconError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_{line} {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The input is well-formed but the model cannot handle it: ill-formed
/// derivations, unparseable sentences, shape mismatches, non-finite bounds.
class ModelError : public Error
{
public:
    using Error::Error;
};

/// A configured resource cap (derivation count, deduction steps, sampler
/// depth or rejection budget) was exceeded.
class CapExceeded : public Error
{
public:
    using Error::Error;
};

} // namespace pdmg

#endif
