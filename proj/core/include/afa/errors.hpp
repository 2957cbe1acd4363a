#pragma once

#include <stdexcept>
#include <string>

namespace afa {

// One code per contract violation the library reports. Tests match on the
// code, messages are for humans.
enum class Errc {
    InvalidDims,
    NotRealSpectrum,
    InvalidRange,
    InvalidParam,
    NotTensorFile,
    CorruptFile,
    InvalidFrequency,
    DegenerateWave,
    ShapeMismatch,
    NotVerifiable,
    InsufficientBatch,
    InvalidLabel,
    NotADistribution,
    NoTape,
    UnknownCorruption,
    EmptySplit,
    BaselineDegenerate,
    SequenceTooShort,
    NotEnoughClasses,
    InvalidBin,
    NotPnm,
    UnsupportedMaxval,
    InvalidConfig,
    IoError,
};

constexpr const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidDims: return "InvalidDims";
        case Errc::NotRealSpectrum: return "NotRealSpectrum";
        case Errc::InvalidRange: return "InvalidRange";
        case Errc::InvalidParam: return "InvalidParam";
        case Errc::NotTensorFile: return "NotTensorFile";
        case Errc::CorruptFile: return "CorruptFile";
        case Errc::InvalidFrequency: return "InvalidFrequency";
        case Errc::DegenerateWave: return "DegenerateWave";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::NotVerifiable: return "NotVerifiable";
        case Errc::InsufficientBatch: return "InsufficientBatch";
        case Errc::InvalidLabel: return "InvalidLabel";
        case Errc::NotADistribution: return "NotADistribution";
        case Errc::NoTape: return "NoTape";
        case Errc::UnknownCorruption: return "UnknownCorruption";
        case Errc::EmptySplit: return "EmptySplit";
        case Errc::BaselineDegenerate: return "BaselineDegenerate";
        case Errc::SequenceTooShort: return "SequenceTooShort";
        case Errc::NotEnoughClasses: return "NotEnoughClasses";
        case Errc::InvalidBin: return "InvalidBin";
        case Errc::NotPnm: return "NotPnm";
        case Errc::UnsupportedMaxval: return "UnsupportedMaxval";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace afa
