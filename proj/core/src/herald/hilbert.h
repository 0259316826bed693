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

#ifndef HERALD_HILBERT_H
#define HERALD_HILBERT_H

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace herald {

using Complex = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kDefaultDimensionBudget = std::size_t{1} << 24;
inline constexpr unsigned kDefaultFockCutoff = 2;
inline constexpr double kNormTolerance = 1e-12;
/// Branches lighter than this are numerical residue and are dropped.
inline constexpr double kNegligibleProbability = 1e-20;

/// Matter qubit basis: |up> is bit 0, |down> is bit 1. Only |down> couples to
/// the cavity, so the bit value doubles as "this emitter would fire".
inline constexpr bool kUp = false;
inline constexpr bool kDown = true;

enum class SubsystemKind { Qubit, Mode };

struct Subsystem {
    SubsystemKind kind;
    std::size_t index;

    static Subsystem qubit(std::size_t q) { return {SubsystemKind::Qubit, q}; }
    static Subsystem mode(std::size_t m) { return {SubsystemKind::Mode, m}; }
    bool operator==(const Subsystem &) const = default;
};

/// A computational basis element: one bit per qubit (qubit 0 first) and one
/// photon number per mode.
struct BasisLabel {
    std::vector<bool> qubits;
    std::vector<unsigned> occupations;
    bool operator==(const BasisLabel &) const = default;
};

/// Bookkeeping for a register of matter qubits followed by bosonic modes.
///
/// Composite index = qubit_bits * (cutoff+1)^modes + mixed-radix occupation
/// number, with qubit 0 and mode 0 as the most significant digits. Every mode
/// shares one inclusive photon-number cutoff.
class SubsystemLayout {
   public:
    SubsystemLayout() = default;
    SubsystemLayout(
        std::size_t qubit_count,
        std::size_t mode_count,
        unsigned fock_cutoff = kDefaultFockCutoff,
        std::size_t dimension_budget = kDefaultDimensionBudget);

    std::size_t qubit_count() const { return qubit_count_; }
    std::size_t mode_count() const { return mode_count_; }
    unsigned fock_cutoff() const { return fock_cutoff_; }
    std::size_t dimension() const { return dimension_; }
    std::size_t dimension_budget() const { return dimension_budget_; }

    std::size_t radix(Subsystem s) const;
    std::size_t stride(Subsystem s) const;
    std::size_t digit(std::size_t index, Subsystem s) const;
    bool qubit_value(std::size_t index, std::size_t q) const;
    unsigned occupation(std::size_t index, std::size_t m) const;
    unsigned total_photons(std::size_t index) const;

    std::size_t index_of(const BasisLabel &label) const;
    BasisLabel decompose(std::size_t index) const;
    /// Human readable ket label such as "|ud;1,0>".
    std::string ket(std::size_t index) const;

    void check_subsystem(Subsystem s) const;
    bool operator==(const SubsystemLayout &other) const;

   private:
    std::size_t qubit_count_ = 0;
    std::size_t mode_count_ = 0;
    unsigned fock_cutoff_ = kDefaultFockCutoff;
    std::size_t dimension_budget_ = kDefaultDimensionBudget;
    std::size_t dimension_ = 1;
    std::size_t mode_block_ = 1;
};

/// Concatenates layouts (a's subsystems first). Cutoffs must agree.
SubsystemLayout concat(const SubsystemLayout &a, const SubsystemLayout &b);

struct Term {
    Complex amplitude;
    std::string_view qubits;  // 'u'/'d' per qubit
    std::vector<unsigned> occupations;
};

class PureState {
   public:
    PureState() = default;
    PureState(SubsystemLayout layout, Amplitudes amplitudes);

    /// All qubits |up>, all modes vacuum.
    static PureState ground(const SubsystemLayout &layout);
    static PureState basis(const SubsystemLayout &layout, std::size_t index);
    static PureState basis(
        const SubsystemLayout &layout, std::string_view qubits, const std::vector<unsigned> &occupations = {});
    /// Normalized superposition of labelled basis terms.
    static PureState from_terms(const SubsystemLayout &layout, std::initializer_list<Term> terms);
    static PureState from_terms(const SubsystemLayout &layout, std::span<const Term> terms);
    /// Product state of independent single-qubit states (up, down) amplitude pairs.
    static PureState product(std::span<const std::pair<Complex, Complex>> qubits);

    const SubsystemLayout &layout() const { return layout_; }
    const Amplitudes &amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t index) const { return amplitudes_[static_cast<Eigen::Index>(index)]; }

    double norm() const { return amplitudes_.norm(); }
    /// Divides by the norm; throws ValidationError for a null vector.
    PureState normalized() const;
    /// Expected number of photons in a mode.
    double mean_photons(std::size_t mode) const;
    std::string to_string(double threshold = 1e-9) const;

   private:
    SubsystemLayout layout_;
    Amplitudes amplitudes_;
};

class DensityOperator {
   public:
    DensityOperator() = default;
    DensityOperator(SubsystemLayout layout, Matrix matrix);
    explicit DensityOperator(const PureState &state);

    /// sum_i w_i |psi_i><psi_i| with the weights renormalized to unit sum.
    static DensityOperator mixture(std::span<const std::pair<double, PureState>> components);

    const SubsystemLayout &layout() const { return layout_; }
    const Matrix &matrix() const { return matrix_; }

    Complex trace() const { return matrix_.trace(); }
    double hermiticity_error() const;
    double min_eigenvalue() const;
    /// Hermitian and unit trace within 1e-12, no eigenvalue below -1e-10.
    bool is_physical() const;
    double mean_photons(std::size_t mode) const;

   private:
    SubsystemLayout layout_;
    Matrix matrix_;
};

template <typename State>
struct Outcome {
    double probability;
    State post_state;
    std::string label;
};

PureState tensor(const PureState &a, const PureState &b);
DensityOperator tensor(const DensityOperator &a, const DensityOperator &b);

/// Applies a linear operator on the joint local space of `targets` (first
/// target is the most significant local digit). No unitarity check.
Amplitudes apply_operator(
    const SubsystemLayout &layout, const Amplitudes &amplitudes, const Matrix &op, std::span<const Subsystem> targets);
/// Applies `op` to each column: returns op * matrix on the full space.
Matrix apply_operator_left(
    const SubsystemLayout &layout, const Matrix &matrix, const Matrix &op, std::span<const Subsystem> targets);

/// Validates unitarity (1e-12) and that targets are distinct and of one kind.
PureState apply_unitary(const PureState &state, const Matrix &u, std::span<const Subsystem> targets);
DensityOperator apply_unitary(const DensityOperator &rho, const Matrix &u, std::span<const Subsystem> targets);
PureState apply_unitary(const PureState &state, const Matrix &u, std::initializer_list<Subsystem> targets);
DensityOperator apply_unitary(const DensityOperator &rho, const Matrix &u, std::initializer_list<Subsystem> targets);

DensityOperator partial_trace(const DensityOperator &rho, std::span<const Subsystem> keep);
DensityOperator partial_trace(const DensityOperator &rho, std::initializer_list<Subsystem> keep);

double fidelity(const PureState &a, const PureState &b);
double fidelity(const PureState &a, const DensityOperator &rho);

std::vector<Outcome<PureState>> measure_projective(
    const PureState &state, std::span<const Matrix> projectors, std::span<const Subsystem> targets);
std::vector<Outcome<DensityOperator>> measure_projective(
    const DensityOperator &rho, std::span<const Matrix> projectors, std::span<const Subsystem> targets);

/// Removes qubit `q`, which must be in the definite computational state
/// `value` (support elsewhere is a ValidationError).
PureState discard_qubit(const PureState &state, std::size_t q, bool value);

namespace gates {
Matrix identity(std::size_t dimension);
Matrix hadamard();
Matrix pauli_x();
Matrix pauli_z();
/// Projectors onto |up>, |down> of one qubit.
std::vector<Matrix> computational_projectors();
/// Projectors onto |+> = (|up>+|down>)/sqrt2 and |->.
std::vector<Matrix> plus_minus_projectors();
}  // namespace gates

/// A linear map on an amplitude vector over `layout` (layout preserved).
using LinearMap = std::function<Amplitudes(const SubsystemLayout &, const Amplitudes &)>;

/// One measurement result and the Kraus operators realizing it. A channel is
/// an instrument with a single outcome.
struct KrausOutcome {
    std::string label;
    std::vector<LinearMap> kraus;
};
using Instrument = std::vector<KrausOutcome>;

struct WeightedBranch {
    std::string label;
    double probability;
    PureState state;
};

/// Unravels an instrument on a pure state: one normalized branch per Kraus
/// operator with non-negligible weight.
std::vector<WeightedBranch> unravel(const PureState &state, const Instrument &instrument);
std::vector<Outcome<DensityOperator>> apply_instrument(const DensityOperator &rho, const Instrument &instrument);
DensityOperator apply_channel(const DensityOperator &rho, const Instrument &instrument);

/// Lifts a local matrix to a LinearMap on the targets.
LinearMap local_map(Matrix op, std::vector<Subsystem> targets);

}  // namespace herald

#endif
