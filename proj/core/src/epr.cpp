#include "nsm/epr.hpp"

#include <cmath>

namespace nsm {

double SqueezeParams::r() const {
    if (lambda <= 0.0)
        throw std::domain_error("SqueezeParams::r: undefined for lambda = 0");
    return lambda_prime / lambda;
}

Amp GeneralizedBellSpec::omega() const {
    return std::polar(1.0, 2.0 * M_PI / (n + 1));
}

double GeneralizedBellSpec::phase_eigenvalue() const {
    return 2.0 * M_PI * m / (n + 1);
}

namespace {

void check_lambda(double lambda) {
    if (lambda < 0.0 || lambda >= 1.0)
        throw std::domain_error("squeezing parameter must lie in [0, 1)");
}

int reduce_phase_index(int m, int n) {
    int q = m % (n + 1);
    return q < 0 ? q + n + 1 : q;
}

}  // namespace

double bell_norm_k(double lambda, double lambda_prime, int n) {
    double k2 = 0.0;
    for (int k = 0; k <= n; ++k)
        k2 += std::pow(lambda, 2 * k) * std::pow(lambda_prime, 2 * (n - k));
    return std::sqrt(k2);
}

double swap_probability(int n, double lambda, double lambda_prime) {
    check_lambda(lambda);
    check_lambda(lambda_prime);
    const double k = bell_norm_k(lambda, lambda_prime, n);
    return (1.0 - lambda * lambda) * (1.0 - lambda_prime * lambda_prime) *
           k * k / (n + 1);
}

PureState squeezed_vacuum(double lambda, double tail_epsilon) {
    check_lambda(lambda);
    if (tail_epsilon <= 0.0)
        throw std::domain_error("squeezed_vacuum: tail_epsilon must be > 0");
    const double a0 = std::sqrt(1.0 - lambda * lambda);
    AmpMap amps;
    // discarded tail probability after keeping k = 0..K is lambda^{2(K+1)}
    int k = 0;
    double lk = 1.0;
    while (true) {
        amps.emplace(Pattern{k, k}, Amp{a0 * lk, 0.0});
        lk *= lambda;
        if (lk * lk < tail_epsilon) break;
        ++k;
    }
    return PureState(2, std::move(amps), std::max(kDefaultCutoff, k));
}

PureState photon_subtracted(double lambda, double tail_epsilon) {
    check_lambda(lambda);
    if (tail_epsilon <= 0.0)
        throw std::domain_error("photon_subtracted: tail_epsilon must be > 0");
    const double a0 = std::sqrt(std::pow(1.0 - lambda * lambda, 3) /
                                (1.0 + lambda * lambda));
    AmpMap amps;
    double kept = 0.0;
    int k = 0;
    double lk = 1.0;
    while (true) {
        const double a = a0 * (k + 1) * lk;
        amps.emplace(Pattern{k, k}, Amp{a, 0.0});
        kept += a * a;
        lk *= lambda;
        if (1.0 - kept < tail_epsilon) break;
        ++k;
    }
    return PureState(2, std::move(amps), std::max(kDefaultCutoff, k));
}

PureState number_phase_bell(int n, int m) {
    if (n < 0) throw std::domain_error("number_phase_bell: n must be >= 0");
    m = reduce_phase_index(m, n);
    const double a = 1.0 / std::sqrt(n + 1.0);
    AmpMap amps;
    for (int k = 0; k <= n; ++k)
        amps.emplace(Pattern{n - k, k},
                     a * std::polar(1.0, -2.0 * M_PI * m * k / (n + 1)));
    return PureState(2, std::move(amps), std::max(kDefaultCutoff, n));
}

PureState generalized_bell(const GeneralizedBellSpec& spec) {
    if (spec.n < 0) throw std::domain_error("generalized_bell: n must be >= 0");
    const int m = reduce_phase_index(spec.m, spec.n);
    auto phase = [&](int k) {
        return std::polar(1.0, -2.0 * M_PI * m * k / (spec.n + 1));
    };
    AmpMap amps;
    if (spec.squeeze) {
        const double l = spec.squeeze->lambda, lp = spec.squeeze->lambda_prime;
        check_lambda(l);
        check_lambda(lp);
        if (l <= 0.0)
            throw std::domain_error("generalized_bell: r undefined (lambda = 0)");
        const double k_norm = bell_norm_k(l, lp, spec.n);
        for (int k = 0; k <= spec.n; ++k)
            amps.emplace(Pattern{spec.n - k, k},
                         phase(k) * (std::pow(l, spec.n - k) *
                                     std::pow(lp, k) / k_norm));
    } else {
        if (spec.r < 0.0)
            throw std::domain_error("generalized_bell: r must be >= 0");
        double n2 = 0.0;
        for (int k = 0; k <= spec.n; ++k) n2 += std::pow(spec.r, 2 * k);
        const double norm = std::sqrt(n2);
        for (int k = 0; k <= spec.n; ++k)
            amps.emplace(Pattern{spec.n - k, k},
                         phase(k) * (std::pow(spec.r, k) / norm));
    }
    return PureState(2, std::move(amps), std::max(kDefaultCutoff, spec.n));
}

PureState custom_epr(EprKind kind, const std::vector<Amp>& profile) {
    if (profile.empty())
        throw std::invalid_argument("custom_epr: empty profile");
    double n2 = 0.0;
    for (const Amp& d : profile) n2 += std::norm(d);
    if (std::abs(n2 - 1.0) > 1e-10)
        throw std::invalid_argument("custom_epr: profile is not normalized");
    AmpMap amps;
    const int top = static_cast<int>(profile.size()) - 1;
    for (int k = 0; k <= top; ++k) {
        if (profile[k] == Amp{0.0, 0.0}) continue;
        if (kind == EprKind::NumberSum)
            amps[Pattern{top - k, k}] += profile[k];
        else
            amps[Pattern{k, k}] += profile[k];
    }
    return PureState(2, std::move(amps), std::max(kDefaultCutoff, top));
}

SwapPreparation prepare_via_swapping(double lambda, double lambda_prime,
                                     int n, int m, double tail_epsilon,
                                     double detector_success) {
    if (n < 0) throw std::domain_error("prepare_via_swapping: n must be >= 0");
    if (detector_success <= 0.0 || detector_success > 1.0)
        throw std::domain_error(
            "prepare_via_swapping: detector_success must be in (0, 1]");
    // |lambda>_{13} x |lambda'>_{24} laid out as modes (1,2,3,4)
    const PureState a = squeezed_vacuum(lambda, tail_epsilon);
    const PureState b = squeezed_vacuum(lambda_prime, tail_epsilon);
    AmpMap amps;
    for (const auto& [pa, ca] : a.terms())
        for (const auto& [pb, cb] : b.terms())
            amps.emplace(Pattern{pa[0], pb[0], pa[1], pb[1]}, ca * cb);
    const PureState joint(4, std::move(amps),
                          std::max(a.cutoff(), b.cutoff()));
    ProjectionResult res =
        project_onto_state(joint, {2, 3}, number_phase_bell(n, -m));
    if (!res.state)
        throw std::runtime_error("prepare_via_swapping: zero probability");
    return SwapPreparation{*res.state, res.probability * detector_success};
}

}  // namespace nsm
