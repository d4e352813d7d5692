#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nng {

using Index = std::int64_t;
using Real = double;

/// Bad arguments or malformed input data.
struct InvalidInput : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

/// Dataset, graph or config file could not be parsed. `offset` is the byte
/// (or line, for text formats) position where parsing stopped.
struct ParseError : std::runtime_error
{
    ParseError(const std::string& what, std::int64_t offset)
        : std::runtime_error(what), offset(offset) {}

    std::int64_t offset;
};

/// A collective was invoked with a contribution missing for some rank.
struct CommError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// An algorithm produced output violating its own postconditions.
struct ConsistencyError : std::logic_error
{
    using std::logic_error::logic_error;
};

}
