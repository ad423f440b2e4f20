#pragma once

#include <stdexcept>
#include <string>

namespace patchfeas {

// Malformed or inconsistent input data (spec files, images, CSV, model files).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Architecture description problems: bad syntax, unknown kinds, shape collapse,
// channel mismatches.
struct SpecError : DataError {
    explicit SpecError(const std::string& msg) : DataError(msg) {}
};

// Non-finite values, diverging optimization.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace patchfeas
