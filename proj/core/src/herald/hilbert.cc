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

#include "herald/hilbert.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "herald/errors.h"

namespace herald {

namespace {

std::size_t checked_multiply(std::size_t a, std::size_t b, std::size_t budget) {
    if (b != 0 && a > budget / b) {
        throw DimensionOverflowError("composite basis exceeds the dimension budget of " + std::to_string(budget));
    }
    return a * b;
}

struct LocalGeometry {
    std::vector<std::size_t> strides;
    std::vector<std::size_t> radices;
    std::vector<std::size_t> offsets;  // full-space offset of each local basis index
    std::size_t local_dimension = 1;
};

LocalGeometry local_geometry(const SubsystemLayout &layout, std::span<const Subsystem> targets) {
    LocalGeometry g;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        layout.check_subsystem(targets[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (targets[i] == targets[j]) {
                throw ValidationError("duplicate target subsystem");
            }
        }
        g.strides.push_back(layout.stride(targets[i]));
        g.radices.push_back(layout.radix(targets[i]));
        g.local_dimension *= g.radices.back();
    }
    g.offsets.resize(g.local_dimension);
    for (std::size_t r = 0; r < g.local_dimension; ++r) {
        std::size_t rest = r;
        std::size_t offset = 0;
        for (std::size_t t = targets.size(); t-- > 0;) {
            offset += (rest % g.radices[t]) * g.strides[t];
            rest /= g.radices[t];
        }
        g.offsets[r] = offset;
    }
    return g;
}

bool is_base_index(const LocalGeometry &g, std::size_t index) {
    for (std::size_t t = 0; t < g.strides.size(); ++t) {
        if ((index / g.strides[t]) % g.radices[t] != 0) {
            return false;
        }
    }
    return true;
}

void check_uniform_kind(std::span<const Subsystem> targets) {
    if (targets.empty()) {
        throw ValidationError("operator needs at least one target");
    }
    for (const auto &t : targets) {
        if (t.kind != targets.front().kind) {
            throw ValidationError("qubit and mode targets cannot be mixed in one unitary");
        }
    }
}

void check_unitary(const Matrix &u, std::size_t expected_dimension) {
    if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != expected_dimension) {
        throw ValidationError(
            "operator is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) + " but targets span dimension " +
            std::to_string(expected_dimension));
    }
    Matrix defect = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
    if (defect.cwiseAbs().maxCoeff() > kNormTolerance) {
        throw ValidationError("operator is not unitary within 1e-12");
    }
}

void check_same_layout(const SubsystemLayout &a, const SubsystemLayout &b) {
    if (!(a == b)) {
        throw ValidationError("states live on different layouts");
    }
}

void check_projectors(std::span<const Matrix> projectors, std::size_t local_dimension) {
    if (projectors.empty()) {
        throw ValidationError("measurement needs at least one projector");
    }
    const auto d = static_cast<Eigen::Index>(local_dimension);
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const Matrix &p = projectors[i];
        if (p.rows() != d || p.cols() != d) {
            throw ValidationError("projector dimension does not match targets");
        }
        if ((p * p - p).cwiseAbs().maxCoeff() > 1e-10 || (p - p.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
            throw ValidationError("measurement operator " + std::to_string(i) + " is not an orthogonal projector");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if ((p * projectors[j]).cwiseAbs().maxCoeff() > 1e-10) {
                throw ValidationError("projectors are not mutually orthogonal");
            }
        }
        sum += p;
    }
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
        throw ValidationError("projector set is incomplete");
    }
}

}  // namespace

SubsystemLayout::SubsystemLayout(
    std::size_t qubit_count, std::size_t mode_count, unsigned fock_cutoff, std::size_t dimension_budget)
    : qubit_count_(qubit_count),
      mode_count_(mode_count),
      fock_cutoff_(fock_cutoff),
      dimension_budget_(dimension_budget) {
    if (fock_cutoff == 0) {
        throw ValidationError("fock_cutoff must be positive");
    }
    std::size_t d = 1;
    for (std::size_t m = 0; m < mode_count; ++m) {
        d = checked_multiply(d, fock_cutoff + 1, dimension_budget);
    }
    mode_block_ = d;
    for (std::size_t q = 0; q < qubit_count; ++q) {
        d = checked_multiply(d, 2, dimension_budget);
    }
    dimension_ = d;
}

std::size_t SubsystemLayout::radix(Subsystem s) const {
    return s.kind == SubsystemKind::Qubit ? 2 : fock_cutoff_ + 1;
}

std::size_t SubsystemLayout::stride(Subsystem s) const {
    check_subsystem(s);
    std::size_t result = 1;
    if (s.kind == SubsystemKind::Qubit) {
        result = mode_block_;
        for (std::size_t q = s.index + 1; q < qubit_count_; ++q) {
            result *= 2;
        }
    } else {
        for (std::size_t m = s.index + 1; m < mode_count_; ++m) {
            result *= fock_cutoff_ + 1;
        }
    }
    return result;
}

std::size_t SubsystemLayout::digit(std::size_t index, Subsystem s) const {
    return (index / stride(s)) % radix(s);
}

bool SubsystemLayout::qubit_value(std::size_t index, std::size_t q) const {
    return digit(index, Subsystem::qubit(q)) != 0;
}

unsigned SubsystemLayout::occupation(std::size_t index, std::size_t m) const {
    return static_cast<unsigned>(digit(index, Subsystem::mode(m)));
}

unsigned SubsystemLayout::total_photons(std::size_t index) const {
    unsigned total = 0;
    std::size_t rest = index % mode_block_;
    for (std::size_t m = 0; m < mode_count_; ++m) {
        total += static_cast<unsigned>(rest % (fock_cutoff_ + 1));
        rest /= fock_cutoff_ + 1;
    }
    return total;
}

std::size_t SubsystemLayout::index_of(const BasisLabel &label) const {
    if (label.qubits.size() != qubit_count_ || label.occupations.size() != mode_count_) {
        throw ValidationError("basis label does not match layout");
    }
    std::size_t index = 0;
    for (bool b : label.qubits) {
        index = index * 2 + (b ? 1 : 0);
    }
    for (unsigned n : label.occupations) {
        if (n > fock_cutoff_) {
            throw CutoffOverflowError("occupation " + std::to_string(n) + " exceeds fock cutoff");
        }
        index = index * (fock_cutoff_ + 1) + n;
    }
    return index;
}

BasisLabel SubsystemLayout::decompose(std::size_t index) const {
    if (index >= dimension_) {
        throw ValidationError("basis index out of range");
    }
    BasisLabel label;
    label.qubits.resize(qubit_count_);
    label.occupations.resize(mode_count_);
    std::size_t rest = index;
    for (std::size_t m = mode_count_; m-- > 0;) {
        label.occupations[m] = static_cast<unsigned>(rest % (fock_cutoff_ + 1));
        rest /= fock_cutoff_ + 1;
    }
    for (std::size_t q = qubit_count_; q-- > 0;) {
        label.qubits[q] = (rest % 2) != 0;
        rest /= 2;
    }
    return label;
}

std::string SubsystemLayout::ket(std::size_t index) const {
    BasisLabel label = decompose(index);
    std::string out = "|";
    for (bool b : label.qubits) {
        out += b ? 'd' : 'u';
    }
    if (qubit_count_ > 0 && mode_count_ > 0) {
        out += ';';
    }
    for (std::size_t m = 0; m < mode_count_; ++m) {
        if (m > 0) {
            out += ',';
        }
        out += std::to_string(label.occupations[m]);
    }
    return out + ">";
}

void SubsystemLayout::check_subsystem(Subsystem s) const {
    std::size_t count = s.kind == SubsystemKind::Qubit ? qubit_count_ : mode_count_;
    if (s.index >= count) {
        throw ValidationError(
            std::string(s.kind == SubsystemKind::Qubit ? "qubit" : "mode") + " index " + std::to_string(s.index) +
            " out of range");
    }
}

bool SubsystemLayout::operator==(const SubsystemLayout &other) const {
    return qubit_count_ == other.qubit_count_ && mode_count_ == other.mode_count_ &&
           (mode_count_ == 0 || fock_cutoff_ == other.fock_cutoff_);
}

SubsystemLayout concat(const SubsystemLayout &a, const SubsystemLayout &b) {
    unsigned cutoff = a.fock_cutoff();
    if (a.mode_count() == 0) {
        cutoff = b.fock_cutoff();
    } else if (b.mode_count() > 0 && a.fock_cutoff() != b.fock_cutoff()) {
        throw ValidationError("cannot combine layouts with different fock cutoffs");
    }
    return SubsystemLayout(
        a.qubit_count() + b.qubit_count(),
        a.mode_count() + b.mode_count(),
        cutoff,
        std::min(a.dimension_budget(), b.dimension_budget()));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(SubsystemLayout layout, Amplitudes amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.dimension()) {
        throw ValidationError("amplitude vector does not match layout dimension");
    }
}

PureState PureState::ground(const SubsystemLayout &layout) {
    return basis(layout, 0);
}

PureState PureState::basis(const SubsystemLayout &layout, std::size_t index) {
    if (index >= layout.dimension()) {
        throw ValidationError("basis index out of range");
    }
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
    a[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(layout, std::move(a));
}

namespace {

BasisLabel parse_label(const SubsystemLayout &layout, std::string_view qubits, const std::vector<unsigned> &occ) {
    BasisLabel label;
    for (char c : qubits) {
        if (c == 'u') {
            label.qubits.push_back(kUp);
        } else if (c == 'd') {
            label.qubits.push_back(kDown);
        } else {
            throw ValidationError(std::string("qubit label must use 'u' or 'd', got '") + c + "'");
        }
    }
    label.occupations = occ;
    if (label.occupations.empty()) {
        label.occupations.assign(layout.mode_count(), 0);
    }
    return label;
}

}  // namespace

PureState PureState::basis(
    const SubsystemLayout &layout, std::string_view qubits, const std::vector<unsigned> &occupations) {
    return basis(layout, layout.index_of(parse_label(layout, qubits, occupations)));
}

PureState PureState::from_terms(const SubsystemLayout &layout, std::initializer_list<Term> terms) {
    return from_terms(layout, std::span<const Term>(terms.begin(), terms.size()));
}

PureState PureState::from_terms(const SubsystemLayout &layout, std::span<const Term> terms) {
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
    for (const auto &t : terms) {
        a[static_cast<Eigen::Index>(layout.index_of(parse_label(layout, t.qubits, t.occupations)))] += t.amplitude;
    }
    return PureState(layout, std::move(a)).normalized();
}

PureState PureState::product(std::span<const std::pair<Complex, Complex>> qubits) {
    SubsystemLayout layout(qubits.size(), 0);
    Amplitudes a(static_cast<Eigen::Index>(layout.dimension()));
    for (std::size_t i = 0; i < layout.dimension(); ++i) {
        Complex v = 1.0;
        for (std::size_t q = 0; q < qubits.size(); ++q) {
            v *= layout.qubit_value(i, q) ? qubits[q].second : qubits[q].first;
        }
        a[static_cast<Eigen::Index>(i)] = v;
    }
    return PureState(layout, std::move(a)).normalized();
}

PureState PureState::normalized() const {
    double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ValidationError("cannot normalize a null state");
    }
    return PureState(layout_, amplitudes_ / n);
}

double PureState::mean_photons(std::size_t mode) const {
    layout_.check_subsystem(Subsystem::mode(mode));
    double total = 0;
    for (std::size_t i = 0; i < layout_.dimension(); ++i) {
        total += std::norm(amplitude(i)) * layout_.occupation(i, mode);
    }
    return total;
}

std::string PureState::to_string(double threshold) const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < layout_.dimension(); ++i) {
        Complex a = amplitude(i);
        if (std::abs(a) <= threshold) {
            continue;
        }
        if (!first) {
            out << " + ";
        }
        first = false;
        char buf[64];
        if (std::abs(a.imag()) <= threshold) {
            std::snprintf(buf, sizeof(buf), "%.6g", a.real());
        } else {
            std::snprintf(buf, sizeof(buf), "(%.6g%+.6gi)", a.real(), a.imag());
        }
        out << buf << layout_.ket(i);
    }
    return first ? "0" : out.str();
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(SubsystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(layout_.dimension());
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw ValidationError("density matrix does not match layout dimension");
    }
}

DensityOperator::DensityOperator(const PureState &state)
    : DensityOperator(state.layout(), state.amplitudes() * state.amplitudes().adjoint()) {
}

DensityOperator DensityOperator::mixture(std::span<const std::pair<double, PureState>> components) {
    if (components.empty()) {
        throw ValidationError("mixture needs at least one component");
    }
    const SubsystemLayout &layout = components.front().second.layout();
    const auto d = static_cast<Eigen::Index>(layout.dimension());
    Matrix m = Matrix::Zero(d, d);
    double total = 0;
    for (const auto &[w, psi] : components) {
        check_same_layout(layout, psi.layout());
        if (w < 0) {
            throw ValidationError("mixture weights must be non-negative");
        }
        m += w * (psi.amplitudes() * psi.amplitudes().adjoint());
        total += w;
    }
    if (!(total > 0)) {
        throw ValidationError("mixture weights sum to zero");
    }
    return DensityOperator(layout, m / total);
}

double DensityOperator::hermiticity_error() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
    Matrix h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool DensityOperator::is_physical() const {
    return hermiticity_error() <= kNormTolerance && std::abs(trace() - Complex(1.0)) <= kNormTolerance &&
           min_eigenvalue() >= -1e-10;
}

double DensityOperator::mean_photons(std::size_t mode) const {
    layout_.check_subsystem(Subsystem::mode(mode));
    double total = 0;
    for (std::size_t i = 0; i < layout_.dimension(); ++i) {
        auto k = static_cast<Eigen::Index>(i);
        total += matrix_(k, k).real() * layout_.occupation(i, mode);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Tensor products

namespace {

std::size_t combined_index(
    const SubsystemLayout &a, const SubsystemLayout &b, const SubsystemLayout &ab, std::size_t ia, std::size_t ib) {
    std::size_t block_a = a.dimension() >> a.qubit_count();
    std::size_t block_b = b.dimension() >> b.qubit_count();
    std::size_t block_ab = ab.dimension() >> ab.qubit_count();
    std::size_t bits = ((ia / block_a) << b.qubit_count()) | (ib / block_b);
    std::size_t occ = (ia % block_a) * block_b + (ib % block_b);
    return bits * block_ab + occ;
}

}  // namespace

PureState tensor(const PureState &a, const PureState &b) {
    SubsystemLayout ab = concat(a.layout(), b.layout());
    Amplitudes out = Amplitudes::Zero(static_cast<Eigen::Index>(ab.dimension()));
    for (std::size_t ia = 0; ia < a.layout().dimension(); ++ia) {
        Complex va = a.amplitude(ia);
        if (va == Complex(0.0)) {
            continue;
        }
        for (std::size_t ib = 0; ib < b.layout().dimension(); ++ib) {
            out[static_cast<Eigen::Index>(combined_index(a.layout(), b.layout(), ab, ia, ib))] = va * b.amplitude(ib);
        }
    }
    return PureState(ab, std::move(out));
}

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    SubsystemLayout ab = concat(a.layout(), b.layout());
    const auto d = static_cast<Eigen::Index>(ab.dimension());
    Matrix out = Matrix::Zero(d, d);
    const std::size_t da = a.layout().dimension();
    const std::size_t db = b.layout().dimension();
    std::vector<std::size_t> map(da * db);
    for (std::size_t ia = 0; ia < da; ++ia) {
        for (std::size_t ib = 0; ib < db; ++ib) {
            map[ia * db + ib] = combined_index(a.layout(), b.layout(), ab, ia, ib);
        }
    }
    for (std::size_t i = 0; i < da * db; ++i) {
        for (std::size_t j = 0; j < da * db; ++j) {
            auto ai = static_cast<Eigen::Index>(i / db);
            auto aj = static_cast<Eigen::Index>(j / db);
            auto bi = static_cast<Eigen::Index>(i % db);
            auto bj = static_cast<Eigen::Index>(j % db);
            out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
                a.matrix()(ai, aj) * b.matrix()(bi, bj);
        }
    }
    return DensityOperator(ab, std::move(out));
}

// ---------------------------------------------------------------------------
// Local operators

Amplitudes apply_operator(
    const SubsystemLayout &layout, const Amplitudes &amplitudes, const Matrix &op, std::span<const Subsystem> targets) {
    LocalGeometry g = local_geometry(layout, targets);
    const auto D = static_cast<Eigen::Index>(g.local_dimension);
    if (op.rows() != D || op.cols() != D) {
        throw ValidationError("operator dimension does not match targets");
    }
    Amplitudes out = Amplitudes::Zero(amplitudes.size());
    Amplitudes local(D);
    for (std::size_t base = 0; base < layout.dimension(); ++base) {
        if (!is_base_index(g, base)) {
            continue;
        }
        bool any = false;
        for (Eigen::Index r = 0; r < D; ++r) {
            local[r] = amplitudes[static_cast<Eigen::Index>(base + g.offsets[static_cast<std::size_t>(r)])];
            any = any || local[r] != Complex(0.0);
        }
        if (!any) {
            continue;
        }
        Amplitudes mapped = op * local;
        for (Eigen::Index r = 0; r < D; ++r) {
            out[static_cast<Eigen::Index>(base + g.offsets[static_cast<std::size_t>(r)])] = mapped[r];
        }
    }
    return out;
}

Matrix apply_operator_left(
    const SubsystemLayout &layout, const Matrix &matrix, const Matrix &op, std::span<const Subsystem> targets) {
    Matrix out(matrix.rows(), matrix.cols());
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
        out.col(c) = apply_operator(layout, matrix.col(c), op, targets);
    }
    return out;
}

namespace {

LocalGeometry checked_unitary_targets(
    const SubsystemLayout &layout, const Matrix &u, std::span<const Subsystem> targets) {
    check_uniform_kind(targets);
    LocalGeometry g = local_geometry(layout, targets);
    check_unitary(u, g.local_dimension);
    return g;
}

}  // namespace

PureState apply_unitary(const PureState &state, const Matrix &u, std::span<const Subsystem> targets) {
    checked_unitary_targets(state.layout(), u, targets);
    double before = state.norm();
    Amplitudes out = apply_operator(state.layout(), state.amplitudes(), u, targets);
    double after = out.norm();
    if (std::abs(after - before) > kNormTolerance && after > 0) {
        warn("norm drifted by " + std::to_string(after - before) + " under a unitary; renormalizing");
        out *= before / after;
    }
    return PureState(state.layout(), std::move(out));
}

DensityOperator apply_unitary(const DensityOperator &rho, const Matrix &u, std::span<const Subsystem> targets) {
    checked_unitary_targets(rho.layout(), u, targets);
    Matrix left = apply_operator_left(rho.layout(), rho.matrix(), u, targets);
    Matrix both = apply_operator_left(rho.layout(), left.adjoint(), u, targets);
    Matrix out = both.adjoint();
    Complex tr = out.trace();
    if (std::abs(tr - rho.trace()) > kNormTolerance && std::abs(tr) > 0) {
        warn("trace drifted under a unitary; renormalizing");
        out *= rho.trace() / tr;
    }
    return DensityOperator(rho.layout(), std::move(out));
}

PureState apply_unitary(const PureState &state, const Matrix &u, std::initializer_list<Subsystem> targets) {
    return apply_unitary(state, u, std::span<const Subsystem>(targets.begin(), targets.size()));
}

DensityOperator apply_unitary(const DensityOperator &rho, const Matrix &u, std::initializer_list<Subsystem> targets) {
    return apply_unitary(rho, u, std::span<const Subsystem>(targets.begin(), targets.size()));
}

// ---------------------------------------------------------------------------
// Partial trace

DensityOperator partial_trace(const DensityOperator &rho, std::span<const Subsystem> keep) {
    if (keep.empty()) {
        throw ValidationError("partial_trace needs a non-empty keep list");
    }
    const SubsystemLayout &layout = rho.layout();
    std::vector<bool> keep_qubit(layout.qubit_count(), false);
    std::vector<bool> keep_mode(layout.mode_count(), false);
    for (const auto &s : keep) {
        layout.check_subsystem(s);
        auto &flags = s.kind == SubsystemKind::Qubit ? keep_qubit : keep_mode;
        if (flags[s.index]) {
            throw ValidationError("duplicate subsystem in keep list");
        }
        flags[s.index] = true;
    }
    std::size_t kq = static_cast<std::size_t>(std::count(keep_qubit.begin(), keep_qubit.end(), true));
    std::size_t km = static_cast<std::size_t>(std::count(keep_mode.begin(), keep_mode.end(), true));
    SubsystemLayout reduced(kq, km, layout.fock_cutoff(), layout.dimension_budget());

    const std::size_t d = layout.dimension();
    std::vector<std::size_t> kept_index(d);
    std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < d; ++i) {
        std::size_t kept = 0;
        std::size_t traced = 0;
        for (std::size_t q = 0; q < layout.qubit_count(); ++q) {
            std::size_t bit = layout.qubit_value(i, q) ? 1 : 0;
            if (keep_qubit[q]) {
                kept = kept * 2 + bit;
            } else {
                traced = traced * 2 + bit;
            }
        }
        for (std::size_t m = 0; m < layout.mode_count(); ++m) {
            std::size_t n = layout.occupation(i, m);
            if (keep_mode[m]) {
                kept = kept * (layout.fock_cutoff() + 1) + n;
            } else {
                traced = traced * (layout.fock_cutoff() + 1) + n;
            }
        }
        kept_index[i] = kept;
        groups[traced].push_back(i);
    }
    const auto rd = static_cast<Eigen::Index>(reduced.dimension());
    Matrix out = Matrix::Zero(rd, rd);
    for (const auto &[traced, members] : groups) {
        for (std::size_t i : members) {
            for (std::size_t j : members) {
                out(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
                    rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
    return DensityOperator(reduced, std::move(out));
}

DensityOperator partial_trace(const DensityOperator &rho, std::initializer_list<Subsystem> keep) {
    return partial_trace(rho, std::span<const Subsystem>(keep.begin(), keep.size()));
}

// ---------------------------------------------------------------------------
// Fidelity and measurement

double fidelity(const PureState &a, const PureState &b) {
    check_same_layout(a.layout(), b.layout());
    return std::clamp(std::norm(a.amplitudes().dot(b.amplitudes())), 0.0, 1.0);
}

double fidelity(const PureState &a, const DensityOperator &rho) {
    check_same_layout(a.layout(), rho.layout());
    Complex v = a.amplitudes().dot(rho.matrix() * a.amplitudes());
    return std::clamp(v.real(), 0.0, 1.0);
}

std::vector<Outcome<PureState>> measure_projective(
    const PureState &state, std::span<const Matrix> projectors, std::span<const Subsystem> targets) {
    LocalGeometry g = local_geometry(state.layout(), targets);
    check_projectors(projectors, g.local_dimension);
    std::vector<Outcome<PureState>> outcomes;
    for (std::size_t k = 0; k < projectors.size(); ++k) {
        Amplitudes v = apply_operator(state.layout(), state.amplitudes(), projectors[k], targets);
        double p = v.squaredNorm();
        if (p <= kNegligibleProbability) {
            continue;
        }
        outcomes.push_back({p, PureState(state.layout(), v / std::sqrt(p)), std::to_string(k)});
    }
    return outcomes;
}

std::vector<Outcome<DensityOperator>> measure_projective(
    const DensityOperator &rho, std::span<const Matrix> projectors, std::span<const Subsystem> targets) {
    LocalGeometry g = local_geometry(rho.layout(), targets);
    check_projectors(projectors, g.local_dimension);
    std::vector<Outcome<DensityOperator>> outcomes;
    for (std::size_t k = 0; k < projectors.size(); ++k) {
        Matrix left = apply_operator_left(rho.layout(), rho.matrix(), projectors[k], targets);
        Matrix both = apply_operator_left(rho.layout(), left.adjoint(), projectors[k], targets).adjoint();
        double p = both.trace().real();
        if (p <= kNegligibleProbability) {
            continue;
        }
        outcomes.push_back({p, DensityOperator(rho.layout(), both / p), std::to_string(k)});
    }
    return outcomes;
}

PureState discard_qubit(const PureState &state, std::size_t q, bool value) {
    const SubsystemLayout &layout = state.layout();
    layout.check_subsystem(Subsystem::qubit(q));
    SubsystemLayout reduced(
        layout.qubit_count() - 1, layout.mode_count(), layout.fock_cutoff(), layout.dimension_budget());
    const std::size_t stride = layout.stride(Subsystem::qubit(q));
    Amplitudes out(static_cast<Eigen::Index>(reduced.dimension()));
    double stray = 0;
    for (std::size_t r = 0; r < reduced.dimension(); ++r) {
        std::size_t high = r / stride;
        std::size_t low = r % stride;
        std::size_t with0 = high * 2 * stride + low;
        std::size_t keep = with0 + (value ? stride : 0);
        std::size_t other = with0 + (value ? 0 : stride);
        out[static_cast<Eigen::Index>(r)] = state.amplitude(keep);
        stray += std::norm(state.amplitude(other));
    }
    if (stray > kNormTolerance) {
        throw ValidationError("qubit " + std::to_string(q) + " is not in a definite state and cannot be discarded");
    }
    return PureState(reduced, std::move(out));
}

namespace gates {

Matrix identity(std::size_t dimension) {
    auto d = static_cast<Eigen::Index>(dimension);
    return Matrix::Identity(d, d);
}

Matrix hadamard() {
    Matrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

Matrix pauli_x() {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

Matrix pauli_z() {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

std::vector<Matrix> computational_projectors() {
    Matrix up = Matrix::Zero(2, 2);
    Matrix down = Matrix::Zero(2, 2);
    up(0, 0) = 1;
    down(1, 1) = 1;
    return {up, down};
}

std::vector<Matrix> plus_minus_projectors() {
    Matrix plus(2, 2);
    Matrix minus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    return {plus, minus};
}

}  // namespace gates

// ---------------------------------------------------------------------------
// Instruments

std::vector<WeightedBranch> unravel(const PureState &state, const Instrument &instrument) {
    std::vector<WeightedBranch> branches;
    for (const auto &outcome : instrument) {
        for (const auto &k : outcome.kraus) {
            Amplitudes v = k(state.layout(), state.amplitudes());
            double p = v.squaredNorm();
            if (p <= kNegligibleProbability) {
                continue;
            }
            branches.push_back({outcome.label, p, PureState(state.layout(), v / std::sqrt(p))});
        }
    }
    return branches;
}

namespace {

Matrix sandwich(const SubsystemLayout &layout, const Matrix &rho, const LinearMap &k) {
    Matrix left(rho.rows(), rho.cols());
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        left.col(c) = k(layout, rho.col(c));
    }
    Matrix adj = left.adjoint();
    Matrix both(rho.rows(), rho.cols());
    for (Eigen::Index c = 0; c < adj.cols(); ++c) {
        both.col(c) = k(layout, adj.col(c));
    }
    return both;
}

}  // namespace

std::vector<Outcome<DensityOperator>> apply_instrument(const DensityOperator &rho, const Instrument &instrument) {
    std::vector<Outcome<DensityOperator>> outcomes;
    const auto d = static_cast<Eigen::Index>(rho.layout().dimension());
    for (const auto &outcome : instrument) {
        Matrix sum = Matrix::Zero(d, d);
        for (const auto &k : outcome.kraus) {
            sum += sandwich(rho.layout(), rho.matrix(), k);
        }
        double p = sum.trace().real();
        if (p <= kNegligibleProbability) {
            continue;
        }
        outcomes.push_back({p, DensityOperator(rho.layout(), sum / p), outcome.label});
    }
    return outcomes;
}

DensityOperator apply_channel(const DensityOperator &rho, const Instrument &instrument) {
    const auto d = static_cast<Eigen::Index>(rho.layout().dimension());
    Matrix sum = Matrix::Zero(d, d);
    for (const auto &outcome : instrument) {
        for (const auto &k : outcome.kraus) {
            sum += sandwich(rho.layout(), rho.matrix(), k);
        }
    }
    Complex tr = sum.trace();
    if (std::abs(tr - rho.trace()) > kNormTolerance && std::abs(tr) > 0) {
        warn("channel is not trace preserving on this input; renormalizing");
        sum *= rho.trace() / tr;
    }
    return DensityOperator(rho.layout(), std::move(sum));
}

LinearMap local_map(Matrix op, std::vector<Subsystem> targets) {
    return [op = std::move(op), targets = std::move(targets)](const SubsystemLayout &layout, const Amplitudes &a) {
        return apply_operator(layout, a, op, targets);
    };
}

}  // namespace herald
