#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsm {

using Amp = std::complex<double>;

// Photon counts per mode. Lexicographic ordering (std::map default for
// vectors) fixes the iteration order used everywhere, including the
// textual serialization.
using Pattern = std::vector<int>;
using AmpMap = std::map<Pattern, Amp>;

inline constexpr double kPruneThreshold = 1e-15;
inline constexpr double kTol = 1e-12;
inline constexpr int kDefaultCutoff = 64;

// Sparse multimode photon-number state. Immutable after construction;
// stored amplitudes are nonzero and finite, patterns all have length
// mode_count. The squared norm is in (0, 1]; the normalized flag records
// whether it is 1 within kTol.
class PureState {
public:
    PureState(int mode_count, AmpMap amps, int cutoff = kDefaultCutoff,
              double prune_threshold = kPruneThreshold);

    int mode_count() const { return mode_count_; }
    int cutoff() const { return cutoff_; }
    const AmpMap& terms() const { return amps_; }
    bool is_normalized() const { return normalized_; }
    double squared_norm() const;
    PureState normalized() const;

    // Amplitude of one basis pattern (zero if absent).
    Amp amplitude(const Pattern& pattern) const;

    int max_total_photons() const;

    // One line per term: "n1 n2 ... nM  re  im", lexicographic order.
    std::string to_text() const;
    static PureState from_text(const std::string& text,
                               int cutoff = kDefaultCutoff);

private:
    int mode_count_;
    AmpMap amps_;
    int cutoff_;
    bool normalized_;
};

PureState make_basis_state(const Pattern& counts);

// Sums duplicate patterns, prunes zero results. Throws if the patterns
// disagree in length or everything cancels.
PureState superpose(const std::vector<std::pair<Pattern, Amp>>& terms);

// Same, but rescales the summed amplitudes to unit norm, so the term
// list may carry any overall magnitude.
PureState normalized_superpose(
    const std::vector<std::pair<Pattern, Amp>>& terms);

// Conjugate-linear in a, linear in b.
Amp inner_product(const PureState& a, const PureState& b);

PureState tensor(const PureState& a, const PureState& b);

struct ProjectionResult {
    double probability = 0.0;
    // Normalized conditional state on the unmeasured modes; absent when
    // the probability vanishes (or when every mode was measured).
    std::optional<PureState> state;
};

// Projects the given modes onto a definite photon-count outcome.
// At least one mode must remain; use projection_probability otherwise.
ProjectionResult project_modes(const PureState& state,
                               const std::vector<int>& modes,
                               const Pattern& outcome);

// Scalar variant; also valid when every mode is measured.
double projection_probability(const PureState& state,
                              const std::vector<int>& modes,
                              const Pattern& outcome);

// Projects the given modes onto an arbitrary (normalized) state living on
// exactly those modes; target.mode_count() must equal modes.size(). At
// least one mode must remain.
ProjectionResult project_onto_state(const PureState& state,
                                    const std::vector<int>& modes,
                                    const PureState& target);

}  // namespace nsm
