#pragma once

#include <stdexcept>
#include <string>

namespace vatc {

/// Runtime failure (I/O, malformed data, training failure).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or command-line usage.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vatc
