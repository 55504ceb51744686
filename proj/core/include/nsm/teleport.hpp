#pragma once

#include <string>

#include "nsm/bell.hpp"
#include "nsm/epr.hpp"

namespace nsm {

// Declared success probability of the conditional Bell detector for a
// given number sum: 1 for n <= 1, 3/8 for n = 2, 1 (ideal) otherwise.
double default_detector_success(int n_tilde);

enum class StepKind {
    ReversalScaling,     // resource: squeezed vacuum
    ReversalDerivative,  // resource: photon-subtracted squeezed vacuum
    NumberShift,         // resource: |N, 0, 1>
    Scaling,             // resource: |N, 0, r>, measured at n_tilde = N
    CustomEPR,           // resource: explicit amplitude profile
};

// One teleportation stage: an EPR resource plus a number-sum measurement.
// detector_success is the declared p for the teleport measurement;
// prep_detector_success the declared p for the Bell measurement inside
// the swapping preparation, booked only when `squeeze` is attached.
struct ManipulationStep {
    StepKind kind = StepKind::ReversalScaling;
    int n_tilde = 0;     // measured number sum
    int n = 0;           // resource photon-number sum (shift/scaling/custom)
    double lambda = 0.0; // squeeze parameter for (a)/(b)
    double r = 1.0;      // amplitude ratio for scaling
    std::optional<SqueezeParams> squeeze;  // underlying (lambda, lambda')
    double detector_success = 1.0;
    double prep_detector_success = 1.0;
    std::vector<Amp> profile;  // CustomEPR only
    EprKind profile_kind = EprKind::NumberSum;
    double tail_epsilon = kDefaultTailEps;

    static ManipulationStep reversal_scaling(double lambda, int n_tilde,
                                             double p = 1.0);
    static ManipulationStep reversal_derivative(double lambda, int n_tilde,
                                                double p = 1.0);
    static ManipulationStep number_shift(int n, int n_tilde, double p = 1.0,
                                         double prep_p = 1.0);
    static ManipulationStep scaling(int n, double r, double p = 1.0,
                                    double prep_p = 1.0);
    static ManipulationStep custom_epr_step(EprKind kind,
                                            std::vector<Amp> profile,
                                            int n_tilde, double p = 1.0);

    // Attaches the underlying squeeze parameters (books the swapping
    // preparation probability). Only meaningful for shift/scaling steps;
    // requires lambda'/lambda or lambda/lambda' to equal r.
    ManipulationStep& with_squeeze(double lambda, double lambda_prime);

    int delta_n() const { return n_tilde - n; }
    int n_zero() const { return std::max(0, -delta_n()); }

    // Builds the EPR resource state for this step.
    PureState resource() const;
};

// Teleports one mode of the input through the given two-mode resource:
// forms input (x) epr, projects (input_mode, first epr mode) onto the
// uniform number-sum Bell state. The remaining epr mode carries the
// output and ends up as the last mode. Probability is the bare
// projection probability (no detector factors).
ProjectionResult teleport(const PureState& input, int input_mode,
                          const PureState& epr, int n_tilde);

// Marginal photon-number weights of one mode of a normalized state.
std::vector<double> mode_weights(const PureState& state, int mode);

// Closed-form success probability for one step on an input with the
// given marginal weights; includes the declared detector factors and,
// when squeeze parameters are attached, the preparation probability.
double analytic_probability(const ManipulationStep& step,
                            const std::vector<double>& weights);

// Closed form without detector or preparation factors (the bare
// projection probability that teleport() reports).
double analytic_projection_probability(const ManipulationStep& step,
                                       const std::vector<double>& weights);

struct StageRecord {
    std::string label;
    double probability = 1.0;
};

struct PipelineResult {
    PureState output;
    std::vector<StageRecord> stages;
    double net_probability = 1.0;
};

// Runs the steps in order, always teleporting the last mode of the
// current state. Each stage's simulated probability is checked against
// the closed form (1e-10); a zero-probability stage throws with the
// stage index in the message.
PipelineResult run_pipeline(const PureState& input,
                            const std::vector<ManipulationStep>& steps);

// --- named composites -------------------------------------------------

// Reversal over the window 0..n_tilde: scaling-reversal with lambda_dd
// followed by a scaling step with r = 1/lambda_dd prepared from
// (lambda, lambda'). One of lambda'/lambda, lambda/lambda' must equal
// 1/lambda_dd; the pair is used in the order that satisfies this.
std::vector<ManipulationStep> reversal_pipeline(double lambda_dd,
                                                double lambda,
                                                double lambda_prime,
                                                int n_tilde, double p);

std::vector<ManipulationStep> scissors(int n, double p = 1.0);
std::vector<ManipulationStep> two_sided_scissors(int n1, int n2,
                                                 double p_first = 1.0,
                                                 double p_second = 1.0);
std::vector<ManipulationStep> extractor(int n, double p = 1.0);

// |0> -> |N> via a single number-sum-0 measurement on |N, 0> prepared
// from two squeezed vacua with the same lambda.
std::vector<ManipulationStep> n_photon_source(int n, double lambda,
                                              double prep_p = 1.0);

// Coefficient map c_n -> (n+1) lambda^n c_{n+1} on the window
// 0..n_tilde-1: number shift down by one, an internal reversal, then the
// derivative-reversal step.
std::vector<ManipulationStep> differentiate(double lambda, int n_tilde,
                                            double p = 1.0);

// Scaling step with r = 1/lambda applied to one mode of a squeezed
// vacuum |lambda>; yields the truncated maximally entangled state.
std::vector<ManipulationStep> truncated_maximal_epr(int n, double lambda,
                                                    double lambda_prime,
                                                    double lambda_dd,
                                                    double p = 1.0);

// Uniform-profile custom resource with the N1 component removed.
std::vector<ManipulationStep> filter(int n1, int n, double p = 1.0);

}  // namespace nsm
