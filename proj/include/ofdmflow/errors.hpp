// Copyright 2026 The ofdmflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ofdmflow {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An optimization problem violates its structural invariants
/// (dimension mismatch, NaN coefficient, crossed bounds, ...).
struct MalformedProblem : Error {
  using Error::Error;
};

/// An argument is outside the mathematical domain of the operation.
struct DomainError : Error {
  using Error::Error;
};

/// The simplex iteration cap was exceeded.  Signals a numerical
/// cycling bug rather than a property of the input.
struct IterationLimit : Error {
  using Error::Error;
};

/// An enumeration guard rejected the instance before any work started.
struct TooLarge : Error {
  using Error::Error;
};

/// A robust counterpart was requested for an equality row carrying an
/// uncertain coefficient; the caller must relax the row first.
struct EqualityUnderUncertainty : Error {
  using Error::Error;
};

/// An index (terminal, subcarrier, phase) is out of range.
struct IndexError : Error {
  using Error::Error;
};

/// An input file failed validation; the message names the offending
/// key or field.
struct MalformedInput : Error {
  using Error::Error;
};

/// The filesystem refused a read or write.
struct IoError : Error {
  using Error::Error;
};

}  // namespace ofdmflow
