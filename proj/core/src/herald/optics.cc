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

#include "herald/optics.h"

#include <cmath>
#include <string>

#include "herald/errors.h"

namespace herald {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double factorial(unsigned n) {
    return std::tgamma(static_cast<double>(n) + 1.0);
}

double binomial(unsigned n, unsigned k) {
    return std::round(factorial(n) / (factorial(k) * factorial(n - k)));
}

using Polynomial = std::vector<Complex>;  // coefficient of (a^dag)^p (b^dag)^(deg-p)

Complex int_power(Complex x, unsigned k) {
    Complex r = 1.0;
    for (unsigned i = 0; i < k; ++i) {
        r *= x;
    }
    return r;
}

Polynomial linear_power(Complex x, Complex y, unsigned n) {
    Polynomial poly(n + 1, 0.0);
    for (unsigned k = 0; k <= n; ++k) {
        poly[k] = binomial(n, k) * int_power(x, k) * int_power(y, n - k);
    }
    return poly;
}

Polynomial multiply(const Polynomial &p, const Polynomial &q) {
    Polynomial out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            out[i + j] += p[i] * q[j];
        }
    }
    return out;
}

/// Fock action of the creation-operator transform a_j^dag -> sum_i u(i, j) a_i^dag.
Matrix two_mode_fock_operator(const Eigen::Matrix2cd &u, unsigned cutoff, std::vector<std::size_t> *overflow) {
    const unsigned levels = cutoff + 1;
    const auto d = static_cast<Eigen::Index>(levels * levels);
    Matrix op = Matrix::Zero(d, d);
    for (unsigned n = 0; n <= cutoff; ++n) {
        for (unsigned m = 0; m <= cutoff; ++m) {
            Polynomial poly = multiply(linear_power(u(0, 0), u(1, 0), n), linear_power(u(0, 1), u(1, 1), m));
            const unsigned total = n + m;
            const double norm_in = std::sqrt(factorial(n) * factorial(m));
            bool overflowed = false;
            Eigen::VectorXcd column = Eigen::VectorXcd::Zero(d);
            for (unsigned p = 0; p <= total; ++p) {
                unsigned q = total - p;
                Complex amp = poly[p] * std::sqrt(factorial(p) * factorial(q)) / norm_in;
                if (std::abs(amp) < 1e-14) {
                    continue;
                }
                if (p > cutoff || q > cutoff) {
                    overflowed = true;
                    break;
                }
                column[static_cast<Eigen::Index>(p * levels + q)] = amp;
            }
            const std::size_t col = n * levels + m;
            if (overflowed) {
                if (overflow != nullptr) {
                    overflow->push_back(col);
                }
            } else {
                op.col(static_cast<Eigen::Index>(col)) = column;
            }
        }
    }
    return op;
}

Matrix swap_operator(unsigned cutoff) {
    const unsigned levels = cutoff + 1;
    const auto d = static_cast<Eigen::Index>(levels * levels);
    Matrix op = Matrix::Zero(d, d);
    for (unsigned n = 0; n <= cutoff; ++n) {
        for (unsigned m = 0; m <= cutoff; ++m) {
            op(static_cast<Eigen::Index>(m * levels + n), static_cast<Eigen::Index>(n * levels + m)) = 1.0;
        }
    }
    return op;
}

void check_pair(std::size_t a, std::size_t b) {
    if (a == b) {
        throw ValidationError("two-mode element needs two distinct modes, got " + std::to_string(a) + " twice");
    }
}

void check_ports(PolarizationPort a, PolarizationPort b) {
    std::size_t modes[4] = {a.h_mode, a.v_mode, b.h_mode, b.v_mode};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < i; ++j) {
            if (modes[i] == modes[j]) {
                throw ValidationError("polarizing beam splitter ports must use four distinct modes");
            }
        }
    }
}

void check_overflow(
    const SubsystemLayout &layout,
    const Amplitudes &amplitudes,
    std::span<const Subsystem> targets,
    const std::vector<std::size_t> &overflow_columns) {
    if (overflow_columns.empty()) {
        return;
    }
    const std::size_t levels = layout.fock_cutoff() + 1;
    for (std::size_t i = 0; i < layout.dimension(); ++i) {
        if (std::norm(amplitudes[static_cast<Eigen::Index>(i)]) <= kNegligibleProbability) {
            continue;
        }
        std::size_t local = 0;
        for (const auto &t : targets) {
            local = local * levels + layout.digit(i, t);
        }
        for (std::size_t col : overflow_columns) {
            if (col == local) {
                throw CutoffOverflowError(
                    "optical element would populate a Fock level above cutoff " +
                    std::to_string(layout.fock_cutoff()) + " (input " + layout.ket(i) + ")");
            }
        }
    }
}

}  // namespace

std::vector<Subsystem> element_targets(const OpticalElement &element) {
    return std::visit(
        overloaded{
            [](const BeamSplitter &e) {
                check_pair(e.mode_a, e.mode_b);
                return std::vector<Subsystem>{Subsystem::mode(e.mode_a), Subsystem::mode(e.mode_b)};
            },
            [](const PhaseShift &e) { return std::vector<Subsystem>{Subsystem::mode(e.mode)}; },
            [](const PolarizationRotation &e) {
                check_pair(e.h_mode, e.v_mode);
                return std::vector<Subsystem>{Subsystem::mode(e.h_mode), Subsystem::mode(e.v_mode)};
            },
            [](const PolarizingBeamSplitter &e) {
                check_ports(e.port_a, e.port_b);
                return std::vector<Subsystem>{Subsystem::mode(e.port_a.v_mode), Subsystem::mode(e.port_b.v_mode)};
            },
        },
        element);
}

Matrix fock_operator(const OpticalElement &element, unsigned cutoff, std::vector<std::size_t> *overflow_columns) {
    return std::visit(
        overloaded{
            [&](const BeamSplitter &e) {
                const Complex phase = std::polar(1.0, e.phi);
                Eigen::Matrix2cd u;
                u << std::cos(e.theta), std::conj(phase) * std::sin(e.theta), phase * std::sin(e.theta),
                    -std::cos(e.theta);
                return two_mode_fock_operator(u, cutoff, overflow_columns);
            },
            [&](const PhaseShift &e) {
                const auto d = static_cast<Eigen::Index>(cutoff + 1);
                Matrix op = Matrix::Zero(d, d);
                for (Eigen::Index n = 0; n < d; ++n) {
                    op(n, n) = std::polar(1.0, static_cast<double>(n) * e.phi);
                }
                return op;
            },
            [&](const PolarizationRotation &e) {
                Eigen::Matrix2cd u;
                u << std::cos(e.theta), -std::sin(e.theta), std::sin(e.theta), std::cos(e.theta);
                return two_mode_fock_operator(u, cutoff, overflow_columns);
            },
            [&](const PolarizingBeamSplitter &) { return swap_operator(cutoff); },
        },
        element);
}

PureState apply_element(const PureState &state, const OpticalElement &element) {
    std::vector<Subsystem> targets = element_targets(element);
    for (const auto &t : targets) {
        state.layout().check_subsystem(t);
    }
    std::vector<std::size_t> overflow;
    Matrix op = fock_operator(element, state.layout().fock_cutoff(), &overflow);
    check_overflow(state.layout(), state.amplitudes(), targets, overflow);
    return PureState(state.layout(), apply_operator(state.layout(), state.amplitudes(), op, targets));
}

DensityOperator apply_element(const DensityOperator &rho, const OpticalElement &element) {
    std::vector<Subsystem> targets = element_targets(element);
    for (const auto &t : targets) {
        rho.layout().check_subsystem(t);
    }
    std::vector<std::size_t> overflow;
    Matrix op = fock_operator(element, rho.layout().fock_cutoff(), &overflow);
    Amplitudes diagonal = rho.matrix().diagonal();
    check_overflow(rho.layout(), diagonal, targets, overflow);
    Matrix left = apply_operator_left(rho.layout(), rho.matrix(), op, targets);
    Matrix both = apply_operator_left(rho.layout(), left.adjoint(), op, targets);
    return DensityOperator(rho.layout(), both.adjoint());
}

PureState apply_pbs(const PureState &state, PolarizationPort a, PolarizationPort b) {
    return apply_element(state, PolarizingBeamSplitter{a, b});
}

DensityOperator apply_pbs(const DensityOperator &rho, PolarizationPort a, PolarizationPort b) {
    return apply_element(rho, PolarizingBeamSplitter{a, b});
}

// ---------------------------------------------------------------------------
// Detection and loss

void DetectorModel::validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw ValidationError("detector efficiency must lie in [0, 1]");
    }
    if (!(dark_count_prob >= 0.0 && dark_count_prob < 1.0)) {
        throw ValidationError("dark_count_prob must lie in [0, 1)");
    }
}

double DetectorModel::no_click_probability(unsigned photons) const {
    return std::pow(1.0 - efficiency, static_cast<double>(photons)) * (1.0 - dark_count_prob);
}

namespace {

/// sqrt(weight(n)) |0><n| on one mode.
Matrix absorbing_operator(unsigned cutoff, unsigned n, double weight) {
    const auto d = static_cast<Eigen::Index>(cutoff + 1);
    Matrix op = Matrix::Zero(d, d);
    op(0, static_cast<Eigen::Index>(n)) = std::sqrt(weight);
    return op;
}

}  // namespace

Instrument threshold_detector_instrument(const SubsystemLayout &layout, std::size_t mode, const DetectorModel &detector) {
    detector.validate();
    layout.check_subsystem(Subsystem::mode(mode));
    const unsigned cutoff = layout.fock_cutoff();
    Instrument instrument;
    for (bool click : {true, false}) {
        KrausOutcome outcome{click ? kClick : kNoClick, {}};
        // One Kraus operator per photon number: absorption leaves different
        // photon numbers incoherent.
        for (unsigned n = 0; n <= cutoff; ++n) {
            double w = detector.no_click_probability(n);
            outcome.kraus.push_back(local_map(absorbing_operator(cutoff, n, click ? 1.0 - w : w), {Subsystem::mode(mode)}));
        }
        instrument.push_back(std::move(outcome));
    }
    return instrument;
}

std::vector<Outcome<DensityOperator>> measure_threshold(
    const DensityOperator &rho, std::size_t mode, const DetectorModel &detector) {
    return apply_instrument(rho, threshold_detector_instrument(rho.layout(), mode, detector));
}

std::vector<Outcome<DensityOperator>> measure_threshold(
    const PureState &state, std::size_t mode, const DetectorModel &detector) {
    return measure_threshold(DensityOperator(state), mode, detector);
}

Instrument loss_instrument(const SubsystemLayout &layout, std::size_t mode, double transmissivity) {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw ValidationError("transmissivity must lie in [0, 1]");
    }
    layout.check_subsystem(Subsystem::mode(mode));
    const unsigned cutoff = layout.fock_cutoff();
    const auto d = static_cast<Eigen::Index>(cutoff + 1);
    KrausOutcome outcome{"loss", {}};
    for (unsigned lost = 0; lost <= cutoff; ++lost) {
        Matrix op = Matrix::Zero(d, d);
        for (unsigned n = lost; n <= cutoff; ++n) {
            double w = binomial(n, lost) * std::pow(transmissivity, static_cast<double>(n - lost)) *
                       std::pow(1.0 - transmissivity, static_cast<double>(lost));
            op(static_cast<Eigen::Index>(n - lost), static_cast<Eigen::Index>(n)) = std::sqrt(w);
        }
        if (op.cwiseAbs().maxCoeff() > 0) {
            outcome.kraus.push_back(local_map(std::move(op), {Subsystem::mode(mode)}));
        }
    }
    return {outcome};
}

DensityOperator apply_loss(const DensityOperator &rho, std::size_t mode, double transmissivity) {
    return apply_channel(rho, loss_instrument(rho.layout(), mode, transmissivity));
}

DensityOperator apply_loss(const PureState &state, std::size_t mode, double transmissivity) {
    return apply_loss(DensityOperator(state), mode, transmissivity);
}

// ---------------------------------------------------------------------------
// Which-path dephasing

Instrument which_path_dephasing_instrument(
    const SubsystemLayout &layout, std::size_t mode_a, std::size_t mode_b, double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw ValidationError("visibility must lie in [0, 1]");
    }
    check_pair(mode_a, mode_b);
    layout.check_subsystem(Subsystem::mode(mode_a));
    layout.check_subsystem(Subsystem::mode(mode_b));
    const double overlap = std::sqrt(visibility);
    const unsigned levels = layout.fock_cutoff() + 1;
    const auto d = static_cast<Eigen::Index>(levels * levels);
    const std::vector<Subsystem> targets = {Subsystem::mode(mode_a), Subsystem::mode(mode_b)};
    KrausOutcome outcome{"dephase", {}};
    outcome.kraus.push_back(local_map(std::sqrt(overlap) * Matrix::Identity(d, d), targets));
    if (overlap < 1.0) {
        const double scale = std::sqrt(1.0 - overlap);
        for (Eigen::Index k = 0; k < d; ++k) {
            Matrix p = Matrix::Zero(d, d);
            p(k, k) = scale;
            outcome.kraus.push_back(local_map(std::move(p), targets));
        }
    }
    return {outcome};
}

DensityOperator dephase_by_visibility(
    const DensityOperator &rho, std::size_t mode_a, std::size_t mode_b, double visibility) {
    return apply_channel(rho, which_path_dephasing_instrument(rho.layout(), mode_a, mode_b, visibility));
}

DensityOperator dephase_by_visibility(const PureState &state, std::size_t mode_a, std::size_t mode_b, double visibility) {
    return dephase_by_visibility(DensityOperator(state), mode_a, mode_b, visibility);
}

Instrument photon_count_instrument(const SubsystemLayout &layout, std::vector<std::size_t> modes, unsigned expected) {
    for (std::size_t m : modes) {
        layout.check_subsystem(Subsystem::mode(m));
    }
    auto project = [modes, expected](bool keep_matching) {
        return [modes, expected, keep_matching](const SubsystemLayout &layout, const Amplitudes &a) {
            Amplitudes out = a;
            for (std::size_t i = 0; i < layout.dimension(); ++i) {
                unsigned total = 0;
                for (std::size_t m : modes) {
                    total += layout.occupation(i, m);
                }
                if ((total == expected) != keep_matching) {
                    out[static_cast<Eigen::Index>(i)] = 0.0;
                }
            }
            return out;
        };
    };
    return {KrausOutcome{"present", {project(true)}}, KrausOutcome{"absent", {project(false)}}};
}

}  // namespace herald
