#pragma once

#include <array>
#include <string>

#include "nsm/epr.hpp"
#include "nsm/linear_optics.hpp"

namespace nsm {

// Linear-optical implementation of the conditional projection onto the
// number-sum Bell state with n_tilde photons. The unitary acts on the
// two measured modes plus ancilla_count ancilla modes (in that order);
// accept_pattern is the detector pattern that heralds success.
// g[m] is the amplitude of accept_pattern when the measured modes carry
// the Bell state with phase index m; g[0] != 0 and g[m != 0] ~ 0 make
// the device a clean conditional projector with success |g[0]|^2.
struct DetectorDesign {
    int n_tilde = 0;
    int ancilla_count = 0;
    ModeUnitary unitary;
    Pattern accept_pattern;
    std::vector<Amp> g;  // size n_tilde + 1

    double success_probability() const;
    double max_cross_talk() const;

    std::string to_text() const;
    static DetectorDesign from_text(const std::string& text);
};

// Computes the g amplitudes for a candidate unitary and wraps everything
// into a DetectorDesign. Throws if accept_pattern photons != n_tilde or
// sizes disagree.
DetectorDesign make_detector_design(int n_tilde, int ancilla_count,
                                    ModeUnitary unitary,
                                    Pattern accept_pattern);

// Reference semantics for every teleportation step: project modes (i, j)
// onto the uniform number-sum Bell state with n_tilde photons.
ProjectionResult ideal_bell_project(const PureState& state, int mode_i,
                                    int mode_j, int n_tilde);

// Outcome classification of the 50/50 beam-splitter measurement on two
// modes. Complete for inputs supported on number sum <= 1.
struct FiftyFiftyResult {
    struct Branch {
        std::string label;  // "bell-0-0", "bell-1-0", "bell-1-1", "other"
        double probability = 0.0;
        std::optional<PureState> state;  // remainder, absent for "other"
    };
    std::vector<Branch> branches;
};

FiftyFiftyResult fifty_fifty_measure(const PureState& state, int mode_i,
                                     int mode_j);

// Three-mode conditional detector for number sum 2: one ancilla, three
// two-mode elements composed as U = U_0a * U_1a * U_01.
DetectorDesign n2_detector(const BeamSplitterSpec& u0a,
                           const BeamSplitterSpec& u1a,
                           const BeamSplitterSpec& u01,
                           Pattern accept_pattern = {0, 1, 1});

// The published parameter triples for the number-sum-2 detector.
DetectorDesign reference_n2_design();

// Attaches ancilla vacua, applies the design unitary on
// (mode_i, mode_j, ancillas) and post-selects the accept pattern.
// Probability equals success_probability() times the ideal projection
// probability; the conditional state matches ideal_bell_project up to a
// global phase.
ProjectionResult conditional_bell_measure(const PureState& state, int mode_i,
                                          int mode_j,
                                          const DetectorDesign& design);

// Largest amplitude deviation between a and b after optimizing a single
// global phase; states must share mode count.
double global_phase_distance(const PureState& a, const PureState& b);

}  // namespace nsm
