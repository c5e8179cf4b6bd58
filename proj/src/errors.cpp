#include "reducebench/errors.hpp"

namespace reducebench {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::NonNumericFeature: return "NonNumericFeature";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::SingleClassDataset: return "SingleClassDataset";
        case ErrorCode::ClassTooSmall: return "ClassTooSmall";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::InvalidCodeDim: return "InvalidCodeDim";
        case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::InvalidTargetDim: return "InvalidTargetDim";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::ModelUntrained: return "ModelUntrained";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::EmptyResults: return "EmptyResults";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace reducebench
