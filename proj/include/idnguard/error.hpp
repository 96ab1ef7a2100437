#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idnguard {

enum class Errc {
    // domain_model
    EmptyInput,
    EmptyLabel,
    LabelTooLong,
    NameTooLong,
    InvalidCharacter,
    MalformedPunycode,
    // confusables / config files
    ConfigParseError,
    InvalidEntry,
    // enrichment
    NetworkError,
    ParseError,
    FutureCreation,
    DuplicateScanner,
    TooManyVerdicts,
    // ingestion
    FileNotFound,
    EmptyListError,
    MissingColumn,
    MalformedRow,
    EmptyClass,
    // classifier
    EmptyPartition,
    SingleClassDataset,
    ArityMismatch,
    TooFewRecords,
    SingleClassInput,
    InvalidParams,
    ModelFormat,
    FeatureOrderMismatch,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace idnguard
