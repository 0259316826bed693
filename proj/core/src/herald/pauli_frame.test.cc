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

#include "gtest/gtest.h"

using namespace herald;

TEST(pauli_frame, empty) {
    PauliFrame f;
    ASSERT_TRUE(f.empty());
    ASSERT_EQ(f.to_string(), "I");
    ASSERT_EQ(f.at(FrameTarget::matter(3)), PauliCorrection{});
}

TEST(pauli_frame, generators_are_involutions) {
    PauliFrame f;
    f.flip_z(FrameTarget::matter(0));
    ASSERT_FALSE(f.empty());
    ASSERT_EQ(f.to_string(), "Z(q0)");
    f.flip_z(FrameTarget::matter(0));
    ASSERT_TRUE(f.empty());
    ASSERT_EQ(f, PauliFrame{});

    PauliFrame g;
    g.flip_x(FrameTarget::photon(1));
    ASSERT_TRUE(g.compose(g).empty());
}

TEST(pauli_frame, to_string_orders_targets) {
    PauliFrame f;
    f.flip_x(FrameTarget::photon(1));
    f.flip_z(FrameTarget::matter(0));
    f.flip_x(FrameTarget::matter(2));
    f.flip_z(FrameTarget::matter(2));
    ASSERT_EQ(f.to_string(), "Z(q0) X(q2) Z(q2) X(p1)");
}

TEST(pauli_frame, composition_is_associative) {
    std::vector<PauliFrame> frames(3);
    frames[0].flip_x(FrameTarget::matter(0));
    frames[0].flip_z(FrameTarget::photon(0));
    frames[1].flip_z(FrameTarget::matter(0));
    frames[1].flip_z(FrameTarget::photon(0));
    frames[2].flip_x(FrameTarget::matter(0));
    frames[2].flip_x(FrameTarget::photon(2));
    auto left = frames[0].compose(frames[1]).compose(frames[2]);
    auto right = frames[0].compose(frames[1].compose(frames[2]));
    ASSERT_EQ(left, right);
    ASSERT_EQ(left.at(FrameTarget::matter(0)), (PauliCorrection{false, true}));
    ASSERT_EQ(left.at(FrameTarget::photon(0)), PauliCorrection{});
    ASSERT_EQ(frames[0].compose(frames[1]), frames[1].compose(frames[0]));
}
