#pragma once

#include <stdexcept>
#include <string>

namespace riskscout {

enum class Errc {
    DuplicateFeature,
    WidthTooSmall,
    EmptySchema,
    UnknownFeature,
    ValueOutOfRange,
    LengthMismatch,
    MissingStats,
    UnknownKind,
    BadParam,
    BatchMismatch,
    SingularKernel,
    EmptyHistory,
    TooManyQubits,
    SchemaMismatch,
    EmptyArchive,
    InsufficientData,
    ZeroVariance,
    BadConfig,
    IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace riskscout
