#pragma once

#include <stdexcept>
#include <string>

namespace reducebench {

enum class ErrorCode {
    // dataset / csv
    FileNotFound,
    MalformedRow,
    NonNumericFeature,
    EmptyDataset,
    SingleClassDataset,
    ClassTooSmall,
    DegenerateInput,
    // shared contracts
    DimensionMismatch,
    LengthMismatch,
    LabelOutOfRange,
    // autoencoder
    InvalidCodeDim,
    NonFiniteLoss,
    // nca
    SingleClass,
    InvalidTargetDim,
    // classifiers
    KTooLarge,
    EmptyClass,
    ModelUntrained,
    // metrics
    EmptyMatrix,
    // harness / io
    InvalidConfig,
    EmptyResults,
    IoError,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception. `code()` identifies the contract that was violated;
/// the message carries the specifics (file, line, column, dimension, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code),
          message_(message) {}

    ErrorCode code() const noexcept { return code_; }

    /// The specifics without the code-name prefix, for rewrapping with context.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

} // namespace reducebench
