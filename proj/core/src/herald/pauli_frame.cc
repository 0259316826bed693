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

#include "herald/pauli_frame.h"

namespace herald {

void PauliFrame::flip_x(FrameTarget target) {
    entries_[target].x ^= true;
    prune(target);
}

void PauliFrame::flip_z(FrameTarget target) {
    entries_[target].z ^= true;
    prune(target);
}

PauliCorrection PauliFrame::at(FrameTarget target) const {
    auto it = entries_.find(target);
    return it == entries_.end() ? PauliCorrection{} : it->second;
}

bool PauliFrame::empty() const {
    return entries_.empty();
}

PauliFrame PauliFrame::compose(const PauliFrame &other) const {
    PauliFrame out = *this;
    for (const auto &[target, c] : other.entries_) {
        if (c.x) {
            out.flip_x(target);
        }
        if (c.z) {
            out.flip_z(target);
        }
    }
    return out;
}

std::string PauliFrame::to_string() const {
    if (entries_.empty()) {
        return "I";
    }
    std::string out;
    for (const auto &[target, c] : entries_) {
        std::string name = (target.kind == FrameTarget::Kind::MatterQubit ? "q" : "p") + std::to_string(target.index);
        if (c.x) {
            out += (out.empty() ? "" : " ") + std::string("X(") + name + ")";
        }
        if (c.z) {
            out += (out.empty() ? "" : " ") + std::string("Z(") + name + ")";
        }
    }
    return out;
}

bool PauliFrame::operator==(const PauliFrame &other) const {
    return entries_ == other.entries_;
}

void PauliFrame::prune(FrameTarget target) {
    auto it = entries_.find(target);
    if (it != entries_.end() && !it->second.x && !it->second.z) {
        entries_.erase(it);
    }
}

}  // namespace herald
