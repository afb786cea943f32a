// Copyright 2026 The rsa2 Authors
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

#ifndef RSA2_ERRORS_HPP_
#define RSA2_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rsa2 {

// Base class for every error raised by the library. The four categories
// below map onto the CLI exit codes (config=2, data=3, provider=4, model=5).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- model errors (exit code 5) -------------------------------------------

class ModelError : public Error {
 public:
  using Error::Error;
};

// Every weight in a normalization step was zero. A model that annihilates
// all probability mass is misconfigured (bad lexicon or rhetorical function),
// so this is never silently replaced by a uniform distribution.
class AllZeroMassError : public ModelError {
 public:
  using ModelError::ModelError;
};

class LengthMismatchError : public ModelError {
 public:
  using ModelError::ModelError;
};

class SpaceMismatchError : public ModelError {
 public:
  using ModelError::ModelError;
};

class WeightsNotNormalizedError : public ModelError {
 public:
  using ModelError::ModelError;
};

class LabelOutOfSpaceError : public ModelError {
 public:
  using ModelError::ModelError;
};

class DivisionByZeroPriorError : public ModelError {
 public:
  using ModelError::ModelError;
};

// The Lemma-1 construction requires strictly positive meaning priors.
class ZeroPriorViolationError : public ModelError {
 public:
  using ModelError::ModelError;
};

class ShapeMismatchError : public ModelError {
 public:
  using ModelError::ModelError;
};

class NonFiniteLossError : public ModelError {
 public:
  using ModelError::ModelError;
};

class EmptySplitError : public ModelError {
 public:
  using ModelError::ModelError;
};

class TooFewPointsError : public ModelError {
 public:
  using ModelError::ModelError;
};

class EmptyClusterError : public ModelError {
 public:
  using ModelError::ModelError;
};

// --- data errors (exit code 3) ---------------------------------------------

class DataError : public Error {
 public:
  using Error::Error;
};

class KeyMismatchError : public DataError {
 public:
  using DataError::DataError;
};

// --- provider errors (exit code 4) -----------------------------------------

class ProviderError : public Error {
 public:
  using Error::Error;
};

class AuthError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class TimeoutError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class ProtocolError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// The endpoint answered but did not return usable logprobs.
class MissingLogprobError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class EmptyGenerationError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// --- config errors (exit code 2) --------------------------------------------

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsa2

#endif  // RSA2_ERRORS_HPP_
