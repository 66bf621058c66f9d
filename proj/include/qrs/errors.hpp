// Copyright 2026 The qrs-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qrs {

// Base class of every error raised by the library. Callers that only care
// about "something went wrong" catch this; everything else is specific.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LabelCollision : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotIsolated : public Error {
 public:
  using Error::Error;
};

// Raised when a joint probability is requested over systems that share a
// tensor factor. The message names the overlapping labels.
class NonDisjointSystems : public Error {
 public:
  using Error::Error;
};

// An explicitly supplied candidate basis is not a set of orthonormal
// eigenvectors of the reduced state, or does not cover its support.
class InvalidCandidateBasis : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrs
