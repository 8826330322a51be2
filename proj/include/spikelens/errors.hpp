#pragma once

#include <stdexcept>
#include <string>

namespace spikelens {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// dataset_io
struct WrongMagic : Error {
    explicit WrongMagic(const std::string& msg) : Error(msg) {}
};
struct TruncatedFile : Error {
    explicit TruncatedFile(const std::string& msg) : Error(msg) {}
};
struct LabelOutOfRange : Error {
    explicit LabelOutOfRange(const std::string& msg) : Error(msg) {}
};
struct UnsupportedFormat : Error {
    explicit UnsupportedFormat(const std::string& msg) : Error(msg) {}
};

// edge_detect
struct EmptyImage : Error {
    explicit EmptyImage(const std::string& msg) : Error(msg) {}
};
struct InvalidThresholds : Error {
    explicit InvalidThresholds(const std::string& msg) : Error(msg) {}
};

// signal_conv
struct EmptyDataset : Error {
    explicit EmptyDataset(const std::string& msg) : Error(msg) {}
};

// temporal_codec
struct SignalTooShort : Error {
    explicit SignalTooShort(const std::string& msg) : Error(msg) {}
};
struct NonPositiveThreshold : Error {
    explicit NonPositiveThreshold(const std::string& msg) : Error(msg) {}
};
struct EmptySignal : Error {
    explicit EmptySignal(const std::string& msg) : Error(msg) {}
};
struct CountMismatch : Error {
    explicit CountMismatch(const std::string& msg) : Error(msg) {}
};

// metrics
struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};
struct ZeroSignalPower : Error {
    explicit ZeroSignalPower(const std::string& msg) : Error(msg) {}
};
struct EmptyTrain : Error {
    explicit EmptyTrain(const std::string& msg) : Error(msg) {}
};
struct UndefinedFitness : Error {
    explicit UndefinedFitness(const std::string& msg) : Error(msg) {}
};

// sweep
struct NoFiniteCell : Error {
    explicit NoFiniteCell(const std::string& msg) : Error(msg) {}
};

// cli / datasets
struct MissingLabels : Error {
    explicit MissingLabels(const std::string& msg) : Error(msg) {}
};

}  // namespace spikelens
