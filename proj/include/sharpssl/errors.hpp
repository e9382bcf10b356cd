#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sharpssl {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotFinite : Error {
    using Error::Error;
};

struct NotSymmetric : Error {
    using Error::Error;
};

// A within-class covariance (or other SPD input) failed the Cholesky pivot
// threshold. In practice this means the projected dimension exceeds the
// effective sample rank; it is reported loudly instead of being regularized.
struct SingularWithinCovariance : Error {
    using Error::Error;
};

struct InvalidDimension : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
          row(row),
          column(column) {}
    std::size_t row;
    std::size_t column;
};

struct InconsistentWidth : Error {
    InconsistentWidth(std::size_t row, std::size_t expected, std::size_t got)
        : Error("row " + std::to_string(row) + " has " + std::to_string(got) + " fields, expected " +
                std::to_string(expected)),
          row(row) {}
    std::size_t row;
};

struct LabelOutOfRange : Error {
    using Error::Error;
};

struct ZeroVarianceColumn : Error {
    explicit ZeroVarianceColumn(std::size_t column)
        : Error("column " + std::to_string(column + 1) + " has zero variance; drop it before standardizing"),
          column(column) {}
    std::size_t column;
};

struct NoLabeledData : Error {
    using Error::Error;
};

struct GroupFailed : Error {
    using Error::Error;
};

struct AllRunsFailed : Error {
    using Error::Error;
};

}  // namespace sharpssl
