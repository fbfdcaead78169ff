// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace isac {

/// Base class for domain-level failures (as opposed to config/parse errors).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration or input validation failure.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File / stream level failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// scene_rt
struct EmptyScene : DomainError {
    using DomainError::DomainError;
};

// frame synthesis / cube format
struct ConfigMismatch : ConfigError {
    using ConfigError::ConfigError;
};
struct BadMagic : IoError {
    using IoError::IoError;
};
struct TruncatedPayload : IoError {
    using IoError::IoError;
};
struct DimensionOverflow : IoError {
    using IoError::IoError;
};

// extraction chain
struct TooFewChirps : DomainError {
    using DomainError::DomainError;
};
struct NoInterferenceFound : DomainError {
    using DomainError::DomainError;
};
struct NoDominantPeak : DomainError {
    using DomainError::DomainError;
};
struct DegenerateChirp : DomainError {
    using DomainError::DomainError;
};
struct BadBand : ConfigError {
    using ConfigError::ConfigError;
};

// analysis
struct EmptyWindow : DomainError {
    using DomainError::DomainError;
};
struct TooFewAntennas : ConfigError {
    using ConfigError::ConfigError;
};

} // namespace isac
