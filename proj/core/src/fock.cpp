#include "nsm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace nsm {

namespace {

bool finite(const Amp& a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
}

}  // namespace

PureState::PureState(int mode_count, AmpMap amps, int cutoff,
                     double prune_threshold)
    : mode_count_(mode_count), amps_(std::move(amps)), cutoff_(cutoff) {
    if (mode_count_ <= 0)
        throw std::invalid_argument("PureState: mode count must be positive");
    if (cutoff_ <= 0)
        throw std::invalid_argument("PureState: cutoff must be positive");
    double norm2 = 0.0;
    for (auto it = amps_.begin(); it != amps_.end();) {
        const auto& [pattern, amp] = *it;
        if (static_cast<int>(pattern.size()) != mode_count_)
            throw std::invalid_argument("PureState: pattern length mismatch");
        for (int n : pattern) {
            if (n < 0)
                throw std::invalid_argument("PureState: negative photon count");
            if (n > cutoff_)
                throw std::domain_error("PureState: photon count exceeds cutoff");
        }
        if (!finite(amp))
            throw std::invalid_argument("PureState: non-finite amplitude");
        if (std::abs(amp) < prune_threshold) {
            it = amps_.erase(it);
        } else {
            norm2 += std::norm(amp);
            ++it;
        }
    }
    if (amps_.empty())
        throw std::invalid_argument("PureState: all amplitudes vanish");
    if (norm2 > 1.0 + kTol)
        throw std::invalid_argument("PureState: squared norm exceeds 1");
    normalized_ = std::abs(norm2 - 1.0) <= kTol;
}

double PureState::squared_norm() const {
    double n2 = 0.0;
    for (const auto& [pattern, amp] : amps_) n2 += std::norm(amp);
    return n2;
}

PureState PureState::normalized() const {
    double n = std::sqrt(squared_norm());
    AmpMap scaled;
    for (const auto& [pattern, amp] : amps_) scaled.emplace(pattern, amp / n);
    return PureState(mode_count_, std::move(scaled), cutoff_);
}

Amp PureState::amplitude(const Pattern& pattern) const {
    auto it = amps_.find(pattern);
    return it == amps_.end() ? Amp{0.0, 0.0} : it->second;
}

int PureState::max_total_photons() const {
    int best = 0;
    for (const auto& [pattern, amp] : amps_) {
        int total = 0;
        for (int n : pattern) total += n;
        best = std::max(best, total);
    }
    return best;
}

std::string PureState::to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& [pattern, amp] : amps_) {
        for (int n : pattern) os << n << ' ';
        os << ' ' << amp.real() << "  " << amp.imag() << '\n';
    }
    return os.str();
}

PureState PureState::from_text(const std::string& text, int cutoff) {
    AmpMap amps;
    int mode_count = -1;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::istringstream ls(line);
        std::vector<double> fields;
        double v;
        while (ls >> v) fields.push_back(v);
        if (fields.size() < 3)
            throw std::invalid_argument("PureState::from_text: short line");
        int m = static_cast<int>(fields.size()) - 2;
        if (mode_count < 0) mode_count = m;
        if (m != mode_count)
            throw std::invalid_argument("PureState::from_text: ragged lines");
        Pattern p(m);
        for (int k = 0; k < m; ++k) p[k] = static_cast<int>(fields[k]);
        amps[p] += Amp{fields[m], fields[m + 1]};
    }
    if (mode_count < 0)
        throw std::invalid_argument("PureState::from_text: empty document");
    return PureState(mode_count, std::move(amps), cutoff);
}

PureState make_basis_state(const Pattern& counts) {
    if (counts.empty())
        throw std::invalid_argument("make_basis_state: empty pattern");
    for (int n : counts)
        if (n < 0)
            throw std::domain_error("make_basis_state: negative photon count");
    AmpMap amps;
    amps.emplace(counts, Amp{1.0, 0.0});
    int cutoff = std::max(kDefaultCutoff,
                          *std::max_element(counts.begin(), counts.end()));
    return PureState(static_cast<int>(counts.size()), std::move(amps), cutoff);
}

PureState superpose(const std::vector<std::pair<Pattern, Amp>>& terms) {
    if (terms.empty())
        throw std::invalid_argument("superpose: no terms");
    const size_t len = terms.front().first.size();
    AmpMap amps;
    for (const auto& [pattern, amp] : terms) {
        if (pattern.size() != len)
            throw std::invalid_argument("superpose: inconsistent pattern lengths");
        amps[pattern] += amp;
    }
    for (auto it = amps.begin(); it != amps.end();) {
        if (std::abs(it->second) < kPruneThreshold)
            it = amps.erase(it);
        else
            ++it;
    }
    if (amps.empty())
        throw std::invalid_argument("superpose: all amplitudes cancel");
    int maxn = 0;
    for (const auto& [pattern, amp] : amps)
        for (int n : pattern) maxn = std::max(maxn, n);
    return PureState(static_cast<int>(len), std::move(amps),
                     std::max(kDefaultCutoff, maxn));
}

PureState normalized_superpose(
    const std::vector<std::pair<Pattern, Amp>>& terms) {
    double n2 = 0.0;
    AmpMap summed;
    for (const auto& [pattern, amp] : terms) summed[pattern] += amp;
    for (const auto& [pattern, amp] : summed) n2 += std::norm(amp);
    if (n2 <= 0.0)
        throw std::invalid_argument("normalized_superpose: all amplitudes cancel");
    const double n = std::sqrt(n2);
    std::vector<std::pair<Pattern, Amp>> scaled;
    scaled.reserve(terms.size());
    for (const auto& [pattern, amp] : summed)
        scaled.push_back({pattern, amp / n});
    return superpose(scaled);
}

Amp inner_product(const PureState& a, const PureState& b) {
    if (a.mode_count() != b.mode_count())
        throw std::invalid_argument("inner_product: mode count mismatch");
    // iterate over the smaller support
    const PureState& small = a.terms().size() <= b.terms().size() ? a : b;
    Amp acc{0.0, 0.0};
    if (&small == &a) {
        for (const auto& [pattern, amp] : a.terms())
            acc += std::conj(amp) * b.amplitude(pattern);
    } else {
        for (const auto& [pattern, amp] : b.terms())
            acc += std::conj(a.amplitude(pattern)) * amp;
    }
    return acc;
}

PureState tensor(const PureState& a, const PureState& b) {
    AmpMap amps;
    for (const auto& [pa, ca] : a.terms()) {
        for (const auto& [pb, cb] : b.terms()) {
            Pattern p = pa;
            p.insert(p.end(), pb.begin(), pb.end());
            amps.emplace(std::move(p), ca * cb);
        }
    }
    return PureState(a.mode_count() + b.mode_count(), std::move(amps),
                     std::max(a.cutoff(), b.cutoff()));
}

namespace {

void check_measured_modes(const PureState& state, const std::vector<int>& modes,
                          const Pattern& outcome) {
    if (modes.size() != outcome.size())
        throw std::invalid_argument("projection: modes/outcome size mismatch");
    std::set<int> seen;
    for (int m : modes) {
        if (m < 0 || m >= state.mode_count())
            throw std::out_of_range("projection: mode index out of range");
        if (!seen.insert(m).second)
            throw std::invalid_argument("projection: duplicate mode index");
    }
    for (int n : outcome)
        if (n < 0)
            throw std::domain_error("projection: negative outcome count");
}

// Collects the amplitudes of the component matching the outcome,
// restricted to the unmeasured modes.
AmpMap project_raw(const PureState& state, const std::vector<int>& modes,
                   const Pattern& outcome) {
    std::vector<bool> measured(state.mode_count(), false);
    std::vector<int> expected(state.mode_count(), 0);
    for (size_t k = 0; k < modes.size(); ++k) {
        measured[modes[k]] = true;
        expected[modes[k]] = outcome[k];
    }
    AmpMap rest;
    for (const auto& [pattern, amp] : state.terms()) {
        bool match = true;
        for (size_t k = 0; k < modes.size() && match; ++k)
            match = pattern[modes[k]] == expected[modes[k]];
        if (!match) continue;
        Pattern reduced;
        reduced.reserve(state.mode_count() - modes.size());
        for (int m = 0; m < state.mode_count(); ++m)
            if (!measured[m]) reduced.push_back(pattern[m]);
        rest[std::move(reduced)] += amp;
    }
    return rest;
}

}  // namespace

ProjectionResult project_modes(const PureState& state,
                               const std::vector<int>& modes,
                               const Pattern& outcome) {
    check_measured_modes(state, modes, outcome);
    if (modes.size() == static_cast<size_t>(state.mode_count()))
        throw std::invalid_argument(
            "project_modes: no modes left; use projection_probability");
    AmpMap rest = project_raw(state, modes, outcome);
    double prob = 0.0;
    for (const auto& [pattern, amp] : rest) prob += std::norm(amp);
    ProjectionResult result;
    result.probability = prob;
    if (prob > 0.0) {
        double n = std::sqrt(prob);
        for (auto& [pattern, amp] : rest) amp /= n;
        result.state = PureState(state.mode_count() - static_cast<int>(modes.size()),
                                 std::move(rest), state.cutoff());
    }
    return result;
}

double projection_probability(const PureState& state,
                              const std::vector<int>& modes,
                              const Pattern& outcome) {
    check_measured_modes(state, modes, outcome);
    if (modes.size() == static_cast<size_t>(state.mode_count())) {
        Pattern full(state.mode_count());
        for (size_t k = 0; k < modes.size(); ++k) full[modes[k]] = outcome[k];
        return std::norm(state.amplitude(full));
    }
    AmpMap rest = project_raw(state, modes, outcome);
    double prob = 0.0;
    for (const auto& [pattern, amp] : rest) prob += std::norm(amp);
    return prob;
}

ProjectionResult project_onto_state(const PureState& state,
                                    const std::vector<int>& modes,
                                    const PureState& target) {
    if (static_cast<int>(modes.size()) != target.mode_count())
        throw std::invalid_argument(
            "project_onto_state: target mode count mismatch");
    if (modes.size() >= static_cast<size_t>(state.mode_count()))
        throw std::invalid_argument("project_onto_state: no modes left");
    std::set<int> seen;
    for (int m : modes) {
        if (m < 0 || m >= state.mode_count())
            throw std::out_of_range("project_onto_state: mode out of range");
        if (!seen.insert(m).second)
            throw std::invalid_argument("project_onto_state: duplicate mode");
    }
    std::vector<bool> measured(state.mode_count(), false);
    for (int m : modes) measured[m] = true;
    AmpMap rest;
    for (const auto& [pattern, amp] : state.terms()) {
        Pattern sub(modes.size());
        for (size_t k = 0; k < modes.size(); ++k) sub[k] = pattern[modes[k]];
        const Amp t = target.amplitude(sub);
        if (t == Amp{0.0, 0.0}) continue;
        Pattern reduced;
        reduced.reserve(state.mode_count() - modes.size());
        for (int m = 0; m < state.mode_count(); ++m)
            if (!measured[m]) reduced.push_back(pattern[m]);
        rest[std::move(reduced)] += std::conj(t) * amp;
    }
    double prob = 0.0;
    for (const auto& [pattern, amp] : rest) prob += std::norm(amp);
    ProjectionResult result;
    result.probability = prob;
    if (prob > 0.0) {
        double n = std::sqrt(prob);
        for (auto& [pattern, amp] : rest) amp /= n;
        result.state =
            PureState(state.mode_count() - static_cast<int>(modes.size()),
                      std::move(rest), state.cutoff());
    }
    return result;
}

}  // namespace nsm
