// Acceptance gate: one line per criterion, exit 1 if any fail.
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nsm/detector_design.hpp"
#include "nsm/pipeline_doc.hpp"
#include "nsm/teleport.hpp"

using namespace nsm;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok,
            const std::string& detail = "") {
    std::printf("criterion %2d  %-28s  %s%s%s\n", idx, name.c_str(),
                ok ? "PASS" : "FAIL", detail.empty() ? "" : "  ",
                detail.c_str());
    if (!ok) ++failures;
}

bool matches_1sf(double value, double expected) {
    if (value <= 0.0 || expected <= 0.0) return value == expected;
    const double exp10 = std::floor(std::log10(value));
    const double lead = std::round(value / std::pow(10.0, exp10));
    return lead * std::pow(10.0, exp10) == expected;
}

PureState coeff_state(const std::vector<double>& c) {
    std::vector<std::pair<Pattern, Amp>> terms;
    for (size_t n = 0; n < c.size(); ++n)
        terms.push_back({{static_cast<int>(n)}, Amp{c[n], 0}});
    return normalized_superpose(terms);
}

PureState random_input(std::mt19937& rng, int top) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::pair<Pattern, Amp>> terms;
    for (int n = 0; n <= top; ++n)
        terms.push_back({{n}, Amp{gauss(rng), gauss(rng)}});
    return normalized_superpose(terms);
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

int main() {
    // 1. reference number-sum-2 detector parameters
    {
        const DetectorDesign det = reference_n2_design();
        const bool ok = std::abs(det.success_probability() - 0.375) < 1e-12 &&
                        det.max_cross_talk() < 1e-12;
        report(1, "detector-2 parameters", ok,
               "|g0|^2 = " + fmt(det.success_probability()) +
                   " (expected 0.375), cross-talk = " +
                   fmt(det.max_cross_talk()));
    }

    // 2. complete measurement for number sum <= 1
    {
        const PureState bells[] = {number_phase_bell(0, 0),
                                   number_phase_bell(1, 0),
                                   number_phase_bell(1, 1)};
        const char* labels[] = {"bell-0-0", "bell-1-0", "bell-1-1"};
        double worst = 1.0;
        for (int b = 0; b < 3; ++b) {
            const FiftyFiftyResult res = fifty_fifty_measure(bells[b], 0, 1);
            double got = 0.0;
            for (const auto& br : res.branches)
                if (br.label == labels[b]) got = br.probability;
            worst = std::min(worst, got);
        }
        report(2, "measure-0-1 completeness", std::abs(worst - 1) < 1e-12,
               "min success = " + fmt(worst));
    }

    // 3. qubit reversal
    {
        const PureState qubit = coeff_state({1.0, 0.5});
        const PipelineResult res =
            run_pipeline(qubit, reversal_pipeline(0.7, 0.49, 0.7, 1, 1.0));
        const double n = std::sqrt(5.0);
        const bool ok =
            matches_1sf(res.net_probability, 6e-3) &&
            global_phase_distance(res.output,
                                  coeff_state({1.0 / n, 2.0 / n})) < 1e-10;
        report(3, "reversal qubit", ok, "net = " + fmt(res.net_probability));
    }

    // 4. qutrit reversal
    {
        const PureState qutrit = coeff_state({1.0, 0.5, 0.25});
        const PipelineResult res = run_pipeline(
            qutrit, reversal_pipeline(0.7, 0.7, 0.49, 2, 3.0 / 8.0));
        report(4, "reversal qutrit", matches_1sf(res.net_probability, 2e-5),
               "net = " + fmt(res.net_probability));
    }

    // 5. photon sources
    {
        const PureState vacuum = make_basis_state({0});
        const PipelineResult one =
            run_pipeline(vacuum, n_photon_source(1, 0.5, 1.0));
        const PipelineResult two =
            run_pipeline(vacuum, n_photon_source(2, 0.7, 3.0 / 8.0));
        const bool ok = matches_1sf(one.net_probability, 7e-2) &&
                        matches_1sf(two.net_probability, 8e-3);
        report(5, "photon sources", ok,
               "P(1) = " + fmt(one.net_probability) +
                   ", P(2) = " + fmt(two.net_probability));
    }

    // 6. truncated maximally entangled states
    {
        const PureState sq = squeezed_vacuum(0.7);
        const PipelineResult t1 =
            run_pipeline(sq, truncated_maximal_epr(1, 0.7, 0.49, 0.7, 1.0));
        const PipelineResult t2 = run_pipeline(
            sq, truncated_maximal_epr(2, 0.7, 0.49, 0.7, 3.0 / 8.0));
        const double s = 1.0 / std::sqrt(2.0);
        const double state_dev = global_phase_distance(
            t1.output,
            superpose({{{0, 0}, Amp{s, 0}}, {{1, 1}, Amp{s, 0}}}));
        const bool ok = matches_1sf(t1.net_probability, 1e-2) &&
                        matches_1sf(t2.net_probability, 2e-4) &&
                        state_dev < 1e-10;
        report(6, "truncated EPR", ok,
               "P(N=1) = " + fmt(t1.net_probability) +
                   " (expected 1e-2), P(N=2) = " + fmt(t2.net_probability) +
                   " (expected 2e-4), state dev = " + fmt(state_dev));
    }

    // 7. swapping preparation grid
    {
        double worst_p = 0.0, worst_s = 0.0;
        for (int n = 0; n <= 3; ++n)
            for (int m = 0; m <= n; ++m)
                for (double l : {0.3, 0.5, 0.7})
                    for (double lp : {0.3, 0.5, 0.7}) {
                        const SwapPreparation prep =
                            prepare_via_swapping(l, lp, n, m);
                        worst_p = std::max(
                            worst_p, std::abs(prep.probability -
                                              swap_probability(n, l, lp)));
                        GeneralizedBellSpec spec;
                        spec.n = n;
                        spec.m = m;
                        spec.squeeze = SqueezeParams{l, lp};
                        spec.r = lp / l;
                        worst_s = std::max(
                            worst_s, global_phase_distance(
                                         prep.state, generalized_bell(spec)));
                    }
        report(7, "swapping preparation", worst_p < 1e-10 && worst_s < 1e-10,
               "max prob dev = " + fmt(worst_p) +
                   ", max state dev = " + fmt(worst_s));
    }

    // 8. analytic-vs-simulated property suite
    {
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> unif(0.2, 0.8);
        double worst = 0.0;
        for (int kind = 0; kind < 4; ++kind)
            for (int trial = 0; trial < 200; ++trial) {
                const int n_tilde = 1 + static_cast<int>(rng() % 3);
                const PureState psi = random_input(rng, n_tilde + 1);
                const std::vector<double> w = mode_weights(psi, 0);
                ManipulationStep step;
                switch (kind) {
                    case 0:
                        step = ManipulationStep::reversal_scaling(unif(rng),
                                                                  n_tilde);
                        break;
                    case 1:
                        step = ManipulationStep::reversal_derivative(
                            unif(rng), n_tilde);
                        break;
                    case 2:
                        step = ManipulationStep::number_shift(
                            static_cast<int>(rng() % 4), n_tilde);
                        break;
                    default:
                        step = ManipulationStep::scaling(n_tilde, unif(rng));
                }
                const ProjectionResult res =
                    teleport(psi, 0, step.resource(), step.n_tilde);
                worst = std::max(
                    worst,
                    std::abs(res.probability -
                             analytic_projection_probability(step, w)));
            }
        // uniform-input special cases
        const int nt = 2;
        const PureState uni =
            coeff_state(std::vector<double>(nt + 1, 1.0));
        const double lambda = 0.6, l2 = lambda * lambda;
        const double pa =
            teleport(uni, 0,
                     ManipulationStep::reversal_scaling(lambda, nt).resource(),
                     nt)
                .probability;
        worst = std::max(worst,
                         std::abs(pa - (1 - std::pow(lambda, 2 * (nt + 1))) /
                                           ((nt + 1.0) * (nt + 1.0))));
        double sum = 0.0;
        for (int k = 0; k <= nt; ++k)
            sum += (k + 1.0) * (k + 1.0) * std::pow(lambda, 2 * k);
        const double pb =
            teleport(uni, 0,
                     ManipulationStep::reversal_derivative(lambda, nt)
                         .resource(),
                     nt)
                .probability;
        worst = std::max(
            worst, std::abs(pb - std::pow(1 - l2, 3) / (1 + l2) * sum /
                                     ((nt + 1.0) * (nt + 1.0))));
        const ManipulationStep shift = ManipulationStep::number_shift(4, nt);
        const double pc =
            teleport(uni, 0, shift.resource(), nt).probability;
        worst = std::max(
            worst, std::abs(pc - (1 - shift.n_zero() / 5.0) /
                                     ((nt + 1.0) * (nt + 1.0))));
        const double pd =
            teleport(uni, 0,
                     ManipulationStep::scaling(nt, 0.45).resource(), nt)
                .probability;
        worst = std::max(worst,
                         std::abs(pd - 1.0 / ((nt + 1.0) * (nt + 1.0))));
        report(8, "closed-form property suite", worst < 1e-10,
               "max deviation = " + fmt(worst));
    }

    // 9. equivalence of the conditional detector and the ideal projector
    {
        const DetectorDesign det = reference_n2_design();
        std::mt19937 rng(9);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double worst_s = 0.0, worst_r = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<std::pair<Pattern, Amp>> terms;
            for (int a = 0; a <= 3; ++a)
                for (int b = 0; b <= 3; ++b)
                    for (int c = 0; c <= 1; ++c)
                        terms.push_back(
                            {{a, b, c}, Amp{gauss(rng), gauss(rng)}});
            const PureState psi = normalized_superpose(terms);
            const ProjectionResult ideal = ideal_bell_project(psi, 0, 1, 2);
            const ProjectionResult cond =
                conditional_bell_measure(psi, 0, 1, det);
            if (ideal.state && cond.state)
                worst_s = std::max(
                    worst_s, global_phase_distance(*ideal.state, *cond.state));
            if (ideal.probability > 1e-12)
                worst_r = std::max(
                    worst_r, std::abs(cond.probability / ideal.probability -
                                      3.0 / 8.0));
        }
        report(9, "detector equivalence", worst_s < 1e-10 && worst_r < 1e-10,
               "max state dev = " + fmt(worst_s) +
                   ", max |ratio - 0.375| = " + fmt(worst_r));
    }

    // 10. composition laws
    {
        std::mt19937 rng(10);
        const int nt = 2;
        const PureState psi = random_input(rng, nt);
        const PipelineResult twice = run_pipeline(
            psi, {ManipulationStep::reversal_scaling(0.7, nt),
                  ManipulationStep::reversal_scaling(0.35, nt)});
        const PipelineResult direct =
            run_pipeline(psi, {ManipulationStep::scaling(nt, 0.5)});
        const double dev_aa =
            global_phase_distance(twice.output, direct.output);

        // associativity: ((s1 s2) s3) vs (s1 (s2 s3)) on the same input
        const std::vector<ManipulationStep> s123 = {
            ManipulationStep::scaling(nt, 0.8),
            ManipulationStep::reversal_scaling(0.6, nt),
            ManipulationStep::scaling(nt, 1.25)};
        const PipelineResult joint = run_pipeline(psi, s123);
        PipelineResult left = run_pipeline(psi, {s123[0], s123[1]});
        const PipelineResult right = run_pipeline(left.output, {s123[2]});
        const double dev_assoc =
            global_phase_distance(joint.output, right.output);
        const double dev_net =
            std::abs(joint.net_probability -
                     left.net_probability * right.net_probability);

        bool extractor_ok = false;
        const PipelineResult ext =
            run_pipeline(coeff_state({1.0, 0.0, 0.5}), extractor(2));
        extractor_ok = ext.output.terms().size() == 1 &&
                       std::abs(ext.output.amplitude({2}) - Amp{1, 0}) < 1e-10;
        try {
            run_pipeline(make_basis_state({1}), extractor(2));
            extractor_ok = false;
        } catch (const std::runtime_error&) {
        }
        const bool ok = dev_aa < 1e-10 && dev_assoc < 1e-10 &&
                        dev_net < 1e-10 && extractor_ok;
        report(10, "composition laws", ok,
               "aa-vs-d dev = " + fmt(dev_aa) +
                   ", assoc dev = " + fmt(dev_assoc));
    }

    // 11. detector-design optimizer
    {
        DesignProblem p1;
        p1.n_tilde = 1;
        p1.ancilla_count = 0;
        p1.restarts = 4;
        const DesignReport r1 = design(p1);

        DesignProblem p2;
        p2.n_tilde = 2;
        p2.ancilla_count = 1;
        const DesignReport r2 = design(p2);

        DesignProblem p3;
        p3.n_tilde = 3;
        p3.ancilla_count = 2;
        p3.restarts = 2;
        p3.max_iterations = 1500;
        const DesignReport r3 = design(p3);

        const bool ok = r1.feasible && r1.g0_squared >= 0.49 &&
                        r1.max_cross_talk < 1e-8 && r2.feasible &&
                        r2.g0_squared >= 0.3 && r2.max_cross_talk < 1e-8;
        report(11, "design optimizer", ok,
               "n=1: " + fmt(r1.g0_squared) + ", n=2: " + fmt(r2.g0_squared) +
                   ", n=3 (reporting only): " + fmt(r3.g0_squared) +
                   " cross " + fmt(r3.max_cross_talk));
    }

    std::printf("%s (%d %s failed)\n",
                failures ? "ACCEPTANCE: FAIL" : "ACCEPTANCE: PASS", failures,
                failures == 1 ? "criterion" : "criteria");
    return failures ? 1 : 0;
}
