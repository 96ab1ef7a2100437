#include "idnguard/error.hpp"

namespace idnguard {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptyLabel: return "EmptyLabel";
    case Errc::LabelTooLong: return "LabelTooLong";
    case Errc::NameTooLong: return "NameTooLong";
    case Errc::InvalidCharacter: return "InvalidCharacter";
    case Errc::MalformedPunycode: return "MalformedPunycode";
    case Errc::ConfigParseError: return "ConfigParseError";
    case Errc::InvalidEntry: return "InvalidEntry";
    case Errc::NetworkError: return "NetworkError";
    case Errc::ParseError: return "ParseError";
    case Errc::FutureCreation: return "FutureCreation";
    case Errc::DuplicateScanner: return "DuplicateScanner";
    case Errc::TooManyVerdicts: return "TooManyVerdicts";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::EmptyListError: return "EmptyListError";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::EmptyPartition: return "EmptyPartition";
    case Errc::SingleClassDataset: return "SingleClassDataset";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::TooFewRecords: return "TooFewRecords";
    case Errc::SingleClassInput: return "SingleClassInput";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::ModelFormat: return "ModelFormat";
    case Errc::FeatureOrderMismatch: return "FeatureOrderMismatch";
    }
    return "Unknown";
}

} // namespace idnguard
