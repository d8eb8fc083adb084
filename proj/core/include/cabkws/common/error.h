// core/include/cabkws/common/error.h

// Copyright 2026  The cabkws Authors

// See LICENSE at the repository root for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CABKWS_COMMON_ERROR_H_
#define CABKWS_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace cabkws {

// Base of every error thrown by the library. The CLI maps ConfigError and
// ParseError raised while reading a run configuration to exit code 2 and
// everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes (WAV headers, CSV rows, checkpoint headers).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input in an encoding we do not handle (8-bit PCM, stereo, ...).
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (negative gain, N < 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Tensor or matrix shape does not match what an operation expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or invalid configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A gradient was requested for a quantity the forward pass did not compute.
class GraphError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cabkws

#endif  // CABKWS_COMMON_ERROR_H_
