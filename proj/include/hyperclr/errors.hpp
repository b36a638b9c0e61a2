// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hyperclr {

/// Root of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes, lengths or grids that do not line up.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Malformed or out-of-range configuration, including malformed input files.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures.
class IoError : public Error {
public:
    using Error::Error;
};

/// Base for failures that come out of the numerics rather than the inputs.
class NumericError : public Error {
public:
    using Error::Error;
};

class TransformError : public NumericError {
public:
    using NumericError::NumericError;
};

class GenerationError : public NumericError {
public:
    using NumericError::NumericError;
};

class LossError : public NumericError {
public:
    using NumericError::NumericError;
};

class MetricError : public NumericError {
public:
    using NumericError::NumericError;
};

class TrainingError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace hyperclr
