#pragma once

#include <string>

#include "nsm/bell.hpp"

namespace nsm {

struct DesignProblem {
    int n_tilde = 2;
    int ancilla_count = 1;
    Pattern accept_pattern;  // defaults to (0, 1, ..., 1) with n_tilde ones
    double cross_talk_tolerance = 1e-8;
    int restarts = 8;
    int max_iterations = 4000;
    double initial_penalty = 10.0;
    int penalty_rounds = 14;
    unsigned seed = 12345;

    // Fills accept_pattern when empty and validates the invariants.
    void finalize();

    std::string to_text() const;
    static DesignProblem from_text(const std::string& text);
};

struct DesignReport {
    bool feasible = false;
    double g0_squared = 0.0;
    double max_cross_talk = 0.0;
    int restarts_used = 0;
    long iterations = 0;
    // canonical factorization of the best unitary found
    std::vector<BeamSplitterSpec> blocks;
    std::vector<double> output_phases;
    std::optional<DetectorDesign> design;

    std::string to_text() const;
};

// Multi-start Nelder-Mead over a mesh of two-mode blocks, maximizing
// |g_0|^2 with an escalating penalty on the cross-talk amplitudes.
// Deterministic for a fixed problem (including seed).
DesignReport design(const DesignProblem& problem);

struct VerifyReport {
    int trials = 0;
    double max_probability_deviation = 0.0;
    double max_state_deviation = 0.0;
};

// Re-checks the detector against the ideal projector on random inputs
// with one spectator mode.
VerifyReport verify_design(const DetectorDesign& design, int trials,
                           unsigned seed = 1);

}  // namespace nsm
