#include "nsm/bell.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace nsm {

double DetectorDesign::success_probability() const { return std::norm(g[0]); }

double DetectorDesign::max_cross_talk() const {
    double worst = 0.0;
    for (size_t m = 1; m < g.size(); ++m)
        worst = std::max(worst, std::abs(g[m]));
    return worst;
}

std::string DetectorDesign::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "detector-design\n";
    os << "n-tilde " << n_tilde << '\n';
    os << "ancillas " << ancilla_count << '\n';
    os << "accept";
    for (int n : accept_pattern) os << ' ' << n;
    os << '\n';
    os << "unitary " << unitary.dim() << '\n' << unitary.to_text();
    os << "g\n";
    for (const Amp& a : g) os << a.real() << ' ' << a.imag() << '\n';
    return os.str();
}

DetectorDesign DetectorDesign::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    is >> word;
    if (word != "detector-design")
        throw std::invalid_argument("DetectorDesign::from_text: bad header");
    int n_tilde = -1, ancillas = -1, dim = 0;
    Pattern accept;
    is >> word;
    while (is) {
        if (word == "n-tilde") {
            is >> n_tilde;
        } else if (word == "ancillas") {
            is >> ancillas;
        } else if (word == "accept") {
            std::string line;
            std::getline(is, line);
            std::istringstream ls(line);
            int v;
            while (ls >> v) accept.push_back(v);
        } else if (word == "unitary") {
            is >> dim;
            break;
        } else {
            throw std::invalid_argument(
                "DetectorDesign::from_text: unknown field '" + word + "'");
        }
        is >> word;
    }
    if (n_tilde < 0 || ancillas < 0 || dim <= 0)
        throw std::invalid_argument(
            "DetectorDesign::from_text: missing fields");
    std::vector<Amp> m(static_cast<size_t>(dim) * dim);
    for (auto& e : m) {
        double re, im;
        if (!(is >> re >> im))
            throw std::invalid_argument(
                "DetectorDesign::from_text: truncated unitary");
        e = Amp{re, im};
    }
    // stored g values are ignored in favor of recomputation
    return make_detector_design(n_tilde, ancillas, ModeUnitary(dim, std::move(m)),
                                std::move(accept));
}

DetectorDesign make_detector_design(int n_tilde, int ancilla_count,
                                    ModeUnitary unitary,
                                    Pattern accept_pattern) {
    if (n_tilde < 0 || ancilla_count < 0)
        throw std::invalid_argument("make_detector_design: bad sizes");
    if (unitary.dim() != 2 + ancilla_count)
        throw std::invalid_argument(
            "make_detector_design: unitary dimension must be 2 + ancillas");
    if (static_cast<int>(accept_pattern.size()) != unitary.dim())
        throw std::invalid_argument(
            "make_detector_design: accept pattern length mismatch");
    if (std::accumulate(accept_pattern.begin(), accept_pattern.end(), 0) !=
        n_tilde)
        throw std::invalid_argument(
            "make_detector_design: accept pattern photons must equal n-tilde");
    std::vector<Amp> g(n_tilde + 1);
    for (int m = 0; m <= n_tilde; ++m) {
        PureState in = number_phase_bell(n_tilde, m);
        for (int a = 0; a < ancilla_count; ++a)
            in = tensor(in, make_basis_state({0}));
        g[m] = apply(unitary, in).amplitude(accept_pattern);
    }
    return DetectorDesign{n_tilde, ancilla_count, std::move(unitary),
                          std::move(accept_pattern), std::move(g)};
}

ProjectionResult ideal_bell_project(const PureState& state, int mode_i,
                                    int mode_j, int n_tilde) {
    const PureState target = number_phase_bell(n_tilde, 0);
    if (state.mode_count() == 2) {
        // nothing left after the measurement: scalar probability only
        if (!((mode_i == 0 && mode_j == 1) || (mode_i == 1 && mode_j == 0)))
            throw std::invalid_argument("ideal_bell_project: bad modes");
        Amp overlap{0.0, 0.0};
        for (const auto& [pattern, amp] : state.terms()) {
            const Pattern sub = mode_i == 0
                                    ? pattern
                                    : Pattern{pattern[1], pattern[0]};
            overlap += std::conj(target.amplitude(sub)) * amp;
        }
        ProjectionResult res;
        res.probability = std::norm(overlap);
        return res;
    }
    return project_onto_state(state, {mode_i, mode_j}, target);
}

FiftyFiftyResult fifty_fifty_measure(const PureState& state, int mode_i,
                                     int mode_j) {
    const double isq = 1.0 / std::sqrt(2.0);
    const BeamSplitterSpec half(isq, isq, Amp{1.0, 0.0}, Amp{1.0, 0.0},
                                mode_i, mode_j);
    const PureState mixed =
        apply(beam_splitter(half, state.mode_count()), state);
    FiftyFiftyResult result;
    auto add = [&](const std::string& label, const Pattern& ports) {
        FiftyFiftyResult::Branch b;
        b.label = label;
        if (state.mode_count() == 2) {
            b.probability =
                projection_probability(mixed, {mode_i, mode_j}, ports);
        } else {
            ProjectionResult pr = project_modes(mixed, {mode_i, mode_j}, ports);
            b.probability = pr.probability;
            b.state = std::move(pr.state);
        }
        result.branches.push_back(std::move(b));
    };
    add("bell-0-0", {0, 0});
    add("bell-1-0", {1, 0});
    add("bell-1-1", {0, 1});
    double classified = 0.0;
    for (const auto& b : result.branches) classified += b.probability;
    FiftyFiftyResult::Branch other;
    other.label = "other";
    other.probability = std::max(0.0, state.squared_norm() - classified);
    result.branches.push_back(std::move(other));
    return result;
}

DetectorDesign n2_detector(const BeamSplitterSpec& u0a,
                           const BeamSplitterSpec& u1a,
                           const BeamSplitterSpec& u01,
                           Pattern accept_pattern) {
    const ModeUnitary u = compose(compose(beam_splitter(u0a, 3),
                                          beam_splitter(u1a, 3)),
                                  beam_splitter(u01, 3));
    return make_detector_design(2, 1, u, std::move(accept_pattern));
}

DetectorDesign reference_n2_design() {
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
    const BeamSplitterSpec u0a(1.0 / s2, 1.0 / s2, Amp{1.0, 0.0},
                               Amp{1.0, 0.0}, 0, 2);
    const BeamSplitterSpec u1a(std::sqrt(2.0 / 3.0), 1.0 / s3, Amp{1.0, 0.0},
                               Amp{1.0 / s2, 1.0 / s2}, 1, 2);
    const BeamSplitterSpec u01(std::sqrt(3.0 / 8.0), -std::sqrt(5.0 / 8.0),
                               Amp{1.0, 0.0},
                               Amp{3.0, 1.0} / std::sqrt(10.0), 0, 1);
    return n2_detector(u0a, u1a, u01);
}

ProjectionResult conditional_bell_measure(const PureState& state, int mode_i,
                                          int mode_j,
                                          const DetectorDesign& design) {
    PureState full = state;
    const int base = state.mode_count();
    for (int a = 0; a < design.ancilla_count; ++a)
        full = tensor(full, make_basis_state({0}));
    std::vector<int> modes{mode_i, mode_j};
    for (int a = 0; a < design.ancilla_count; ++a) modes.push_back(base + a);
    const ModeUnitary embedded =
        design.unitary.embed(full.mode_count(), modes);
    const PureState mixed = apply(embedded, full);
    if (modes.size() == static_cast<size_t>(full.mode_count())) {
        ProjectionResult res;
        res.probability =
            projection_probability(mixed, modes, design.accept_pattern);
        return res;
    }
    return project_modes(mixed, modes, design.accept_pattern);
}

double global_phase_distance(const PureState& a, const PureState& b) {
    if (a.mode_count() != b.mode_count())
        throw std::invalid_argument("global_phase_distance: mode mismatch");
    const Amp overlap = inner_product(b, a);
    Amp phase{1.0, 0.0};
    if (std::abs(overlap) > 0.0) phase = overlap / std::abs(overlap);
    double worst = 0.0;
    for (const auto& [pattern, amp] : a.terms())
        worst = std::max(worst, std::abs(amp - phase * b.amplitude(pattern)));
    for (const auto& [pattern, amp] : b.terms())
        worst = std::max(worst, std::abs(a.amplitude(pattern) - phase * amp));
    return worst;
}

}  // namespace nsm
