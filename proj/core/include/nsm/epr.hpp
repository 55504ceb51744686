#pragma once

#include <optional>

#include "nsm/fock.hpp"

namespace nsm {

inline constexpr double kDefaultTailEps = 1e-12;

struct SqueezeParams {
    double lambda = 0.0;
    double lambda_prime = 0.0;

    // ratio of the two squeezing parameters; only defined for lambda > 0
    double r() const;
};

// Label of the two-mode resource with fixed photon-number sum N, phase
// index m and geometric amplitude profile r^k. When the underlying
// squeeze parameters are known they are carried along so preparation
// probabilities can be booked.
struct GeneralizedBellSpec {
    int n = 0;
    int m = 0;
    double r = 1.0;
    std::optional<SqueezeParams> squeeze;

    Amp omega() const;             // exp(i 2 pi / (n+1))
    double phase_eigenvalue() const;  // 2 pi m / (n+1)
};

// K with K^2 = sum_{k=0..N} lambda^{2k} lambda'^{2(N-k)}. This form is
// exact for lambda == lambda' (giving (N+1) lambda^{2N}) and avoids the
// cancellation of the ratio expression near that point.
double bell_norm_k(double lambda, double lambda_prime, int n);

// Closed-form probability of obtaining one specific Bell state |N,m,r>
// from two squeezed vacua via swapping (ideal projection).
double swap_probability(int n, double lambda, double lambda_prime);

PureState squeezed_vacuum(double lambda, double tail_epsilon = kDefaultTailEps);
PureState photon_subtracted(double lambda,
                            double tail_epsilon = kDefaultTailEps);

// |N,m>: amplitudes conj(omega)^{mk} / sqrt(N+1) on |N-k,k>. m is
// reduced mod N+1, so m = -1 names |N,N>.
PureState number_phase_bell(int n, int m);

PureState generalized_bell(const GeneralizedBellSpec& spec);

enum class EprKind { NumberSum, NumberDifference };

// Sum kind: sum_k d_k |N-k,k> with N = profile length - 1.
// Difference kind: sum_k d_k |k,k>. Profile must be normalized.
PureState custom_epr(EprKind kind, const std::vector<Amp>& profile);

struct SwapPreparation {
    PureState state;      // conditional two-mode state, normalized
    double probability;   // includes detector_success factor
};

// Simulates |lambda>_{13} x |lambda'>_{24} and projects modes (3,4)
// onto |N,-m>. detector_success multiplies the reported probability
// (1 = ideal projection).
SwapPreparation prepare_via_swapping(double lambda, double lambda_prime,
                                     int n, int m,
                                     double tail_epsilon = kDefaultTailEps,
                                     double detector_success = 1.0);

}  // namespace nsm
