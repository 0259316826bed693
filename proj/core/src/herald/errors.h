// Copyright 2026 The Herald Authors
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

#ifndef HERALD_ERRORS_H
#define HERALD_ERRORS_H

#include <functional>
#include <stdexcept>
#include <string>

namespace herald {

/// Invalid user-supplied parameters or states (bad ranges, non-unitary
/// operators, mismatched layouts). The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// The composite basis would exceed the configured dimension budget.
class DimensionOverflowError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An operation would populate a Fock level above the layout's cutoff.
class CutoffOverflowError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A conditional emitter fired into a mode that already holds a photon.
class OccupiedModeError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Cavity parameters with g > kappa, where the slow emission rate is complex.
class StrongCouplingError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

using WarningSink = std::function<void(const std::string &)>;

/// Replaces the warning sink (stderr by default). Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string &message);

}  // namespace herald

#endif
