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

#ifndef HERALD_PAULI_FRAME_H
#define HERALD_PAULI_FRAME_H

#include <compare>
#include <cstddef>
#include <map>
#include <string>

namespace herald {

struct FrameTarget {
    enum class Kind { MatterQubit, Photon };
    Kind kind;
    std::size_t index;

    static FrameTarget matter(std::size_t q) { return {Kind::MatterQubit, q}; }
    static FrameTarget photon(std::size_t p) { return {Kind::Photon, p}; }
    auto operator<=>(const FrameTarget &) const = default;
};

struct PauliCorrection {
    bool x = false;
    bool z = false;
    bool operator==(const PauliCorrection &) const = default;
};

/// Classical record of pending Pauli corrections, tracked up to global phase.
/// Composition is per-target XOR, so each generator is self-inverse.
class PauliFrame {
   public:
    void flip_x(FrameTarget target);
    void flip_z(FrameTarget target);
    PauliCorrection at(FrameTarget target) const;

    /// True when every recorded correction is the identity.
    bool empty() const;
    PauliFrame compose(const PauliFrame &other) const;
    const std::map<FrameTarget, PauliCorrection> &entries() const { return entries_; }

    /// E.g. "Z(q0) X(p1)"; "I" for the empty frame.
    std::string to_string() const;
    bool operator==(const PauliFrame &other) const;

   private:
    void prune(FrameTarget target);
    std::map<FrameTarget, PauliCorrection> entries_;
};

}  // namespace herald

#endif
