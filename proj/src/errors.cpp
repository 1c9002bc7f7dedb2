#include "riskscout/errors.hpp"

namespace riskscout {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DuplicateFeature: return "DuplicateFeature";
        case Errc::WidthTooSmall: return "WidthTooSmall";
        case Errc::EmptySchema: return "EmptySchema";
        case Errc::UnknownFeature: return "UnknownFeature";
        case Errc::ValueOutOfRange: return "ValueOutOfRange";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::MissingStats: return "MissingStats";
        case Errc::UnknownKind: return "UnknownKind";
        case Errc::BadParam: return "BadParam";
        case Errc::BatchMismatch: return "BatchMismatch";
        case Errc::SingularKernel: return "SingularKernel";
        case Errc::EmptyHistory: return "EmptyHistory";
        case Errc::TooManyQubits: return "TooManyQubits";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::EmptyArchive: return "EmptyArchive";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::ZeroVariance: return "ZeroVariance";
        case Errc::BadConfig: return "BadConfig";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace riskscout
