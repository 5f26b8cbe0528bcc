#pragma once

#include <stdexcept>
#include <string>

namespace drscreen {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Feature vector / record validation.
struct ArityError : Error {
    using Error::Error;
};
struct RangeError : Error {
    using Error::Error;
};
struct NonFiniteError : Error {
    using Error::Error;
};

// Training.
struct EmptyClassError : Error {
    using Error::Error;
};

// Fusion.
struct MissingWeightsError : Error {
    using Error::Error;
};
struct NotBinaryError : Error {
    using Error::Error;
};

// Metrics / energies.
struct LengthMismatchError : Error {
    using Error::Error;
};
struct OneClassOnlyError : Error {
    using Error::Error;
};

// Data ingestion and splitting.
struct SchemaError : Error {
    using Error::Error;
};
struct ValueError : Error {
    ValueError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};
struct EmptyFileError : Error {
    using Error::Error;
};
struct EmptyAfterFilterError : Error {
    using Error::Error;
};
struct TooFewSamplesError : Error {
    using Error::Error;
};
struct BadProportionsError : Error {
    using Error::Error;
};

// Config file / CLI vocabulary.
struct ConfigError : Error {
    using Error::Error;
};

// Filesystem problems while emitting reports.
struct IoError : Error {
    using Error::Error;
};

}  // namespace drscreen
