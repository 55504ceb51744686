#include "nsm/teleport.hpp"

#include <cmath>
#include <sstream>

namespace nsm {

double default_detector_success(int n_tilde) {
    if (n_tilde <= 1) return 1.0;
    if (n_tilde == 2) return 3.0 / 8.0;
    return 1.0;  // ideal projection assumed where no device is published
}

ManipulationStep ManipulationStep::reversal_scaling(double lambda, int n_tilde,
                                                    double p) {
    ManipulationStep s;
    s.kind = StepKind::ReversalScaling;
    s.lambda = lambda;
    s.n_tilde = n_tilde;
    s.detector_success = p;
    return s;
}

ManipulationStep ManipulationStep::reversal_derivative(double lambda,
                                                       int n_tilde, double p) {
    ManipulationStep s;
    s.kind = StepKind::ReversalDerivative;
    s.lambda = lambda;
    s.n_tilde = n_tilde;
    s.detector_success = p;
    return s;
}

ManipulationStep ManipulationStep::number_shift(int n, int n_tilde, double p,
                                                double prep_p) {
    ManipulationStep s;
    s.kind = StepKind::NumberShift;
    s.n = n;
    s.n_tilde = n_tilde;
    s.r = 1.0;
    s.detector_success = p;
    s.prep_detector_success = prep_p;
    return s;
}

ManipulationStep ManipulationStep::scaling(int n, double r, double p,
                                           double prep_p) {
    ManipulationStep s;
    s.kind = StepKind::Scaling;
    s.n = n;
    s.n_tilde = n;  // scaling keeps the window: measured sum equals N
    s.r = r;
    s.detector_success = p;
    s.prep_detector_success = prep_p;
    return s;
}

ManipulationStep ManipulationStep::custom_epr_step(EprKind kind,
                                                   std::vector<Amp> profile,
                                                   int n_tilde, double p) {
    ManipulationStep s;
    s.kind = StepKind::CustomEPR;
    s.profile = std::move(profile);
    s.profile_kind = kind;
    s.n = kind == EprKind::NumberSum
              ? static_cast<int>(s.profile.size()) - 1
              : 0;
    s.n_tilde = n_tilde;
    s.detector_success = p;
    return s;
}

ManipulationStep& ManipulationStep::with_squeeze(double lambda,
                                                 double lambda_prime) {
    if (kind != StepKind::NumberShift && kind != StepKind::Scaling)
        throw std::logic_error(
            "with_squeeze: only shift/scaling resources are prepared via "
            "swapping");
    if (lambda <= 0.0 || lambda_prime <= 0.0)
        throw std::domain_error("with_squeeze: parameters must be positive");
    const double r1 = lambda_prime / lambda;
    const double r2 = lambda / lambda_prime;
    if (std::abs(r1 - r) < 1e-9) {
        squeeze = SqueezeParams{lambda, lambda_prime};
    } else if (std::abs(r2 - r) < 1e-9) {
        squeeze = SqueezeParams{lambda_prime, lambda};
    } else {
        throw std::domain_error(
            "with_squeeze: neither ratio of the squeeze parameters matches "
            "the step's r");
    }
    return *this;
}

PureState ManipulationStep::resource() const {
    switch (kind) {
        case StepKind::ReversalScaling:
            return squeezed_vacuum(lambda, tail_epsilon);
        case StepKind::ReversalDerivative:
            return photon_subtracted(lambda, tail_epsilon);
        case StepKind::NumberShift: {
            GeneralizedBellSpec spec;
            spec.n = n;
            spec.m = 0;
            spec.r = 1.0;
            return generalized_bell(spec);
        }
        case StepKind::Scaling: {
            GeneralizedBellSpec spec;
            spec.n = n;
            spec.m = 0;
            spec.r = r;
            return generalized_bell(spec);
        }
        case StepKind::CustomEPR:
            return custom_epr(profile_kind, profile);
    }
    throw std::logic_error("resource: unknown step kind");
}

ProjectionResult teleport(const PureState& input, int input_mode,
                          const PureState& epr, int n_tilde) {
    if (epr.mode_count() != 2)
        throw std::invalid_argument("teleport: resource must have two modes");
    if (input_mode < 0 || input_mode >= input.mode_count())
        throw std::out_of_range("teleport: input mode out of range");
    const PureState full = tensor(input, epr);
    return project_onto_state(full, {input_mode, input.mode_count()},
                              number_phase_bell(n_tilde, 0));
}

std::vector<double> mode_weights(const PureState& state, int mode) {
    if (mode < 0 || mode >= state.mode_count())
        throw std::out_of_range("mode_weights: mode out of range");
    std::vector<double> w;
    for (const auto& [pattern, amp] : state.terms()) {
        const int n = pattern[mode];
        if (n >= static_cast<int>(w.size())) w.resize(n + 1, 0.0);
        w[n] += std::norm(amp);
    }
    return w;
}

namespace {

double weight_at(const std::vector<double>& w, int idx) {
    return idx >= 0 && idx < static_cast<int>(w.size()) ? w[idx] : 0.0;
}

}  // namespace

double analytic_projection_probability(const ManipulationStep& step,
                                       const std::vector<double>& weights) {
    const int nt = step.n_tilde;
    double sum = 0.0;
    switch (step.kind) {
        case StepKind::ReversalScaling: {
            const double l2 = step.lambda * step.lambda;
            double lk = 1.0;
            for (int k = 0; k <= nt; ++k, lk *= l2)
                sum += (1.0 - l2) * lk * weight_at(weights, nt - k);
            break;
        }
        case StepKind::ReversalDerivative: {
            const double l2 = step.lambda * step.lambda;
            const double a = std::pow(1.0 - l2, 3) / (1.0 + l2);
            double lk = 1.0;
            for (int k = 0; k <= nt; ++k, lk *= l2)
                sum += a * (k + 1.0) * (k + 1.0) * lk *
                       weight_at(weights, nt - k);
            break;
        }
        case StepKind::NumberShift: {
            for (int k = step.n_zero(); k <= step.n; ++k)
                sum += weight_at(weights, k + step.delta_n()) / (step.n + 1);
            break;
        }
        case StepKind::Scaling: {
            const double r2 = step.r * step.r;
            double norm;
            if (std::abs(step.r - 1.0) < 1e-12) {
                norm = 1.0 / (step.n + 1);
            } else {
                norm = (1.0 - r2) / (1.0 - std::pow(r2, step.n + 1));
            }
            double rk = 1.0;
            for (int k = 0; k <= step.n; ++k, rk *= r2)
                sum += norm * rk * weight_at(weights, k);
            break;
        }
        case StepKind::CustomEPR: {
            const int top = static_cast<int>(step.profile.size()) - 1;
            for (int k = 0; k <= top; ++k) {
                const double dk2 = std::norm(step.profile[k]);
                const int idx = step.profile_kind == EprKind::NumberSum
                                    ? k + (nt - top)
                                    : nt - k;
                sum += dk2 * weight_at(weights, idx);
            }
            break;
        }
    }
    return sum / (nt + 1);
}

double analytic_probability(const ManipulationStep& step,
                            const std::vector<double>& weights) {
    double p = analytic_projection_probability(step, weights) *
               step.detector_success;
    if (step.squeeze)
        p *= swap_probability(step.n, step.squeeze->lambda,
                              step.squeeze->lambda_prime) *
             step.prep_detector_success;
    return p;
}

PipelineResult run_pipeline(const PureState& input,
                            const std::vector<ManipulationStep>& steps) {
    PureState state = input.is_normalized() ? input : input.normalized();
    std::vector<StageRecord> stages;
    double net = 1.0;
    for (size_t i = 0; i < steps.size(); ++i) {
        const ManipulationStep& step = steps[i];
        const std::string tag = "step" + std::to_string(i + 1);
        const int mode = state.mode_count() - 1;
        const std::vector<double> w = mode_weights(state, mode);

        if (step.squeeze) {
            const double prep = swap_probability(step.n, step.squeeze->lambda,
                                                 step.squeeze->lambda_prime);
            stages.push_back({tag + ":epr-prep", prep});
            net *= prep;
            if (step.prep_detector_success != 1.0) {
                stages.push_back(
                    {tag + ":epr-detector", step.prep_detector_success});
                net *= step.prep_detector_success;
            }
        }

        const ProjectionResult res =
            teleport(state, mode, step.resource(), step.n_tilde);
        if (!(res.probability > 0.0) || !res.state) {
            std::ostringstream os;
            os << "run_pipeline: stage " << i + 1
               << " succeeds with zero probability";
            throw std::runtime_error(os.str());
        }
        const double expected = analytic_projection_probability(step, w);
        if (std::abs(res.probability - expected) > 1e-10) {
            std::ostringstream os;
            os.precision(17);
            os << "run_pipeline: stage " << i + 1
               << " probability mismatch: simulated " << res.probability
               << " vs closed form " << expected;
            throw std::logic_error(os.str());
        }
        stages.push_back({tag + ":projection", res.probability});
        net *= res.probability;
        if (step.detector_success != 1.0) {
            stages.push_back({tag + ":detector", step.detector_success});
            net *= step.detector_success;
        }
        state = *res.state;
    }
    return PipelineResult{std::move(state), std::move(stages), net};
}

std::vector<ManipulationStep> reversal_pipeline(double lambda_dd,
                                                double lambda,
                                                double lambda_prime,
                                                int n_tilde, double p) {
    std::vector<ManipulationStep> steps;
    steps.push_back(ManipulationStep::reversal_scaling(lambda_dd, n_tilde, p));
    ManipulationStep second =
        ManipulationStep::scaling(n_tilde, 1.0 / lambda_dd, p, p);
    second.with_squeeze(lambda, lambda_prime);
    steps.push_back(std::move(second));
    return steps;
}

std::vector<ManipulationStep> scissors(int n, double p) {
    return {ManipulationStep::number_shift(n, n, p)};
}

std::vector<ManipulationStep> two_sided_scissors(int n1, int n2,
                                                 double p_first,
                                                 double p_second) {
    if (n1 < 0 || n2 < n1)
        throw std::invalid_argument("two_sided_scissors: need 0 <= n1 <= n2");
    return {ManipulationStep::number_shift(n2 - n1, n2, p_first),
            ManipulationStep::number_shift(n2, n2 - n1, p_second)};
}

std::vector<ManipulationStep> extractor(int n, double p) {
    return two_sided_scissors(n, n, p, 1.0);
}

std::vector<ManipulationStep> n_photon_source(int n, double lambda,
                                              double prep_p) {
    ManipulationStep s = ManipulationStep::number_shift(n, 0, 1.0, prep_p);
    s.with_squeeze(lambda, lambda);
    return {s};
}

std::vector<ManipulationStep> differentiate(double lambda, int n_tilde,
                                            double p) {
    if (n_tilde < 1)
        throw std::invalid_argument("differentiate: need n_tilde >= 1");
    std::vector<ManipulationStep> steps;
    steps.push_back(ManipulationStep::number_shift(n_tilde - 1, n_tilde, p));
    // internal reversal over the reduced window, standard parameters
    const double q = default_detector_success(n_tilde - 1);
    for (auto& s : reversal_pipeline(0.7, 0.49, 0.7, n_tilde - 1, q))
        steps.push_back(std::move(s));
    steps.push_back(
        ManipulationStep::reversal_derivative(lambda, n_tilde - 1, q));
    return steps;
}

std::vector<ManipulationStep> truncated_maximal_epr(int n, double lambda,
                                                    double lambda_prime,
                                                    double lambda_dd,
                                                    double p) {
    ManipulationStep s = ManipulationStep::scaling(n, 1.0 / lambda, p, p);
    s.with_squeeze(lambda_prime, lambda_dd);
    return {s};
}

std::vector<ManipulationStep> filter(int n1, int n, double p) {
    if (n1 < 0 || n1 > n)
        throw std::invalid_argument("filter: need 0 <= n1 <= n");
    std::vector<Amp> profile(n + 1, Amp{1.0 / std::sqrt(double(n)), 0.0});
    profile[n1] = Amp{0.0, 0.0};
    return {ManipulationStep::custom_epr_step(EprKind::NumberSum,
                                              std::move(profile), n, p)};
}

}  // namespace nsm
