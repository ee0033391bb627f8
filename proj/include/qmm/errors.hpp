// Copyright 2026 the qmm-calibrate authors
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

namespace qmm {

/// Base class for every error this library raises on bad input or
/// unsolvable problems. The taxonomy mirrors the CLI exit codes:
/// ConfigError -> 2, DataError -> 3, DomainError/SolveError -> 4.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed configuration (JSON schema, unknown family names, ...).
class ConfigError : public Error {
  using Error::Error;
};

/// Malformed or unusable measurement data (CSV, invariant violations).
class DataError : public Error {
  using Error::Error;
};

/// Abscissa or ordinate outside a model family's domain (logarithms of
/// non-positive values).
class DomainError : public Error {
  using Error::Error;
};

/// Linear system cannot be solved as posed (empty basis, rank 0 with a
/// nonzero right-hand side).
class SolveError : public Error {
  using Error::Error;
};

}  // namespace qmm
