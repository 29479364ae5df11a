// errors.hpp — exception types shared across the library.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ringqed {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter or argument outside its documented domain.
struct InvalidArgument : Error {
    using Error::Error;
};

struct InvalidCalibration : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Two atoms closer than the coincidence threshold. Carries the offending
// pair when known so callers can decide whether to resample.
struct NearCoincidence : Error {
    NearCoincidence(std::string what, std::optional<std::pair<std::size_t, std::size_t>> pair)
        : Error(std::move(what)), pair(pair) {}
    std::optional<std::pair<std::size_t, std::size_t>> pair;
};

struct GenerationFailure : Error {
    using Error::Error;
};

struct UndefinedTransmission : Error {
    using Error::Error;
};

// Left/right eigenvectors could not be paired (matrix not diagonalizable
// within tolerance).
struct DefectiveMatrix : Error {
    using Error::Error;
};

// A lossless eigenmode sits exactly on the drive frequency.
struct DarkPole : Error {
    using Error::Error;
};

struct ZeroDrive : Error {
    using Error::Error;
};

struct NumericalConsistency : Error {
    using Error::Error;
};

struct StepSizeError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    ConfigError(std::string what, std::optional<int> line = std::nullopt)
        : Error(std::move(what)), line(line) {}
    std::optional<int> line;
};

}  // namespace ringqed
