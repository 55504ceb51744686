#include "nsm/detector_design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace nsm {

void DesignProblem::finalize() {
    if (n_tilde < 0 || ancilla_count < 0)
        throw std::invalid_argument("DesignProblem: negative sizes");
    const int dim = 2 + ancilla_count;
    if (accept_pattern.empty()) {
        accept_pattern.assign(dim, 0);
        for (int k = 1; k <= n_tilde && k < dim; ++k) accept_pattern[k] = 1;
        int placed = std::min(n_tilde, dim - 1);
        accept_pattern[dim - 1] += n_tilde - placed;
    }
    if (static_cast<int>(accept_pattern.size()) != dim)
        throw std::invalid_argument("DesignProblem: accept pattern length");
    if (std::accumulate(accept_pattern.begin(), accept_pattern.end(), 0) !=
        n_tilde)
        throw std::invalid_argument(
            "DesignProblem: accept pattern photons must equal n-tilde");
    if (cross_talk_tolerance <= 0.0 || restarts < 1 || max_iterations < 1)
        throw std::invalid_argument("DesignProblem: bad optimizer config");
}

std::string DesignProblem::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "design-problem\n";
    os << "n-tilde " << n_tilde << '\n';
    os << "ancillas " << ancilla_count << '\n';
    if (!accept_pattern.empty()) {
        os << "accept";
        for (int n : accept_pattern) os << ' ' << n;
        os << '\n';
    }
    os << "cross-talk-tol " << cross_talk_tolerance << '\n';
    os << "restarts " << restarts << '\n';
    os << "max-iterations " << max_iterations << '\n';
    os << "seed " << seed << '\n';
    return os.str();
}

DesignProblem DesignProblem::from_text(const std::string& text) {
    DesignProblem p;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (!header) {
            if (key != "design-problem")
                throw std::invalid_argument(
                    "design problem: line 1 must be 'design-problem'");
            header = true;
            continue;
        }
        auto bad = [&](const std::string& what) {
            throw std::invalid_argument("design problem: line " +
                                        std::to_string(lineno) + ": " + what);
        };
        if (key == "n-tilde") {
            if (!(ls >> p.n_tilde)) bad("expected integer after n-tilde");
        } else if (key == "ancillas") {
            if (!(ls >> p.ancilla_count)) bad("expected integer after ancillas");
        } else if (key == "accept") {
            p.accept_pattern.clear();
            int v;
            while (ls >> v) p.accept_pattern.push_back(v);
            if (p.accept_pattern.empty()) bad("empty accept pattern");
        } else if (key == "cross-talk-tol") {
            if (!(ls >> p.cross_talk_tolerance)) bad("bad cross-talk-tol");
        } else if (key == "restarts") {
            if (!(ls >> p.restarts)) bad("bad restarts");
        } else if (key == "max-iterations") {
            if (!(ls >> p.max_iterations)) bad("bad max-iterations");
        } else if (key == "seed") {
            if (!(ls >> p.seed)) bad("bad seed");
        } else {
            bad("unknown field '" + key + "'");
        }
    }
    if (!header)
        throw std::invalid_argument("design problem: empty document");
    p.finalize();
    return p;
}

std::string DesignReport::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "design-report\n";
    os << "feasible " << (feasible ? 1 : 0) << '\n';
    os << "g0-squared " << g0_squared << '\n';
    os << "max-cross-talk " << max_cross_talk << '\n';
    os << "restarts-used " << restarts_used << '\n';
    os << "iterations " << iterations << '\n';
    for (const auto& b : blocks)
        os << "block " << b.mode_i << ' ' << b.mode_j << ' ' << b.c << ' '
           << b.s << ' ' << b.eta.real() << ' ' << b.eta.imag() << ' '
           << b.xi.real() << ' ' << b.xi.imag() << '\n';
    if (!output_phases.empty()) {
        os << "phases";
        for (double p : output_phases) os << ' ' << p;
        os << '\n';
    }
    return os.str();
}

namespace {

// Builds the mesh unitary from (theta, phi) per mode pair; output phases
// are left free since they do not affect any |g_m|.
class MeshEvaluator {
public:
    MeshEvaluator(const DesignProblem& p) : problem_(p), dim_(2 + p.ancilla_count) {
        for (int i = 0; i < dim_; ++i)
            for (int j = i + 1; j < dim_; ++j) pairs_.emplace_back(i, j);
        for (int m = 0; m <= p.n_tilde; ++m) {
            PureState in = number_phase_bell(p.n_tilde, m);
            for (int a = 0; a < p.ancilla_count; ++a)
                in = tensor(in, make_basis_state({0}));
            inputs_.push_back(std::move(in));
        }
    }

    int parameter_count() const { return 2 * static_cast<int>(pairs_.size()); }
    int dim() const { return dim_; }

    ModeUnitary build(const std::vector<double>& x) const {
        std::vector<Amp> u(static_cast<size_t>(dim_) * dim_, Amp{0.0, 0.0});
        for (int k = 0; k < dim_; ++k)
            u[static_cast<size_t>(k) * dim_ + k] = Amp{1.0, 0.0};
        for (size_t b = 0; b < pairs_.size(); ++b) {
            const double theta = x[2 * b], phi = x[2 * b + 1];
            const double c = std::cos(theta), s = std::sin(theta);
            const Amp ep = std::polar(1.0, phi);
            const auto [i, j] = pairs_[b];
            // right-multiply u by the block on (i, j)
            for (int row = 0; row < dim_; ++row) {
                Amp& ui = u[static_cast<size_t>(row) * dim_ + i];
                Amp& uj = u[static_cast<size_t>(row) * dim_ + j];
                const Amp a0 = ui, a1 = uj;
                ui = a0 * c + a1 * (s * std::conj(ep));
                uj = a0 * (-s * ep) + a1 * c;
            }
        }
        return ModeUnitary(dim_, std::move(u));
    }

    std::vector<Amp> g(const std::vector<double>& x) const {
        const ModeUnitary u = build(x);
        std::vector<Amp> out(inputs_.size());
        for (size_t m = 0; m < inputs_.size(); ++m)
            out[m] = apply(u, inputs_[m]).amplitude(problem_.accept_pattern);
        return out;
    }

    double objective(const std::vector<double>& x, double penalty) const {
        const std::vector<Amp> gs = g(x);
        double cross = 0.0;
        for (size_t m = 1; m < gs.size(); ++m) cross += std::norm(gs[m]);
        return -(std::norm(gs[0]) - penalty * cross);
    }

private:
    DesignProblem problem_;
    int dim_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<PureState> inputs_;
};

struct NmResult {
    std::vector<double> x;
    double f = 0.0;
    long iterations = 0;
};

NmResult nelder_mead(const MeshEvaluator& ev, double penalty,
                     std::vector<double> x0, int max_iterations) {
    const int n = static_cast<int>(x0.size());
    std::vector<std::vector<double>> xs(n + 1, x0);
    for (int i = 0; i < n; ++i) xs[i + 1][i] += 0.3;
    std::vector<double> fs(n + 1);
    for (int i = 0; i <= n; ++i) fs[i] = ev.objective(xs[i], penalty);
    long iters = 0;
    std::vector<int> order(n + 1);
    while (iters < max_iterations) {
        ++iters;
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return fs[a] < fs[b]; });
        if (fs[order[n]] - fs[order[0]] < 1e-13) break;
        const int worst = order[n], best = order[0], second = order[n - 1];
        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (int k = 0; k < n; ++k) centroid[k] += xs[i][k] / n;
        }
        auto point = [&](double t) {
            std::vector<double> p(n);
            for (int k = 0; k < n; ++k)
                p[k] = centroid[k] + t * (centroid[k] - xs[worst][k]);
            return p;
        };
        std::vector<double> xr = point(1.0);
        const double fr = ev.objective(xr, penalty);
        if (fr < fs[best]) {
            std::vector<double> xe = point(2.0);
            const double fe = ev.objective(xe, penalty);
            if (fe < fr) {
                xs[worst] = std::move(xe);
                fs[worst] = fe;
            } else {
                xs[worst] = std::move(xr);
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = std::move(xr);
            fs[worst] = fr;
        } else {
            std::vector<double> xc = point(0.5);
            const double fc = ev.objective(xc, penalty);
            if (fc < fs[worst]) {
                xs[worst] = std::move(xc);
                fs[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (int k = 0; k < n; ++k)
                        xs[i][k] = xs[best][k] + 0.5 * (xs[i][k] - xs[best][k]);
                    fs[i] = ev.objective(xs[i], penalty);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fs[i] < fs[best]) best = i;
    return NmResult{xs[best], fs[best], iters};
}

}  // namespace

DesignReport design(const DesignProblem& problem_in) {
    DesignProblem problem = problem_in;
    problem.finalize();
    const MeshEvaluator ev(problem);
    const int np = ev.parameter_count();

    DesignReport report;
    double best_g0 = -1.0;
    bool best_feasible = false;
    std::vector<double> best_x;
    long total_iters = 0;

    for (int restart = 0; restart < problem.restarts; ++restart) {
        std::mt19937 rng(problem.seed + static_cast<unsigned>(restart));
        std::uniform_real_distribution<double> ang(-M_PI, M_PI);
        std::vector<double> x(np);
        for (double& v : x) v = ang(rng);

        double penalty = problem.initial_penalty;
        NmResult run;
        for (int round = 0; round < problem.penalty_rounds; ++round) {
            run = nelder_mead(ev, penalty, x, problem.max_iterations);
            total_iters += run.iterations;
            x = run.x;
            const std::vector<Amp> gs = ev.g(x);
            double cross = 0.0;
            for (size_t m = 1; m < gs.size(); ++m)
                cross = std::max(cross, std::abs(gs[m]));
            if (cross < problem.cross_talk_tolerance) break;
            penalty *= 10.0;
        }
        const std::vector<Amp> gs = ev.g(x);
        double cross = 0.0;
        for (size_t m = 1; m < gs.size(); ++m)
            cross = std::max(cross, std::abs(gs[m]));
        const double g0 = std::norm(gs[0]);
        const bool feasible = cross < problem.cross_talk_tolerance && g0 > 0.0;
        // deterministic merge: feasibility first, then |g0|^2, ties kept
        // at the earlier restart
        const bool better =
            (feasible && !best_feasible) ||
            (feasible == best_feasible && g0 > best_g0 + 1e-15);
        if (better) {
            best_feasible = feasible;
            best_g0 = g0;
            best_x = x;
        }
    }

    report.restarts_used = problem.restarts;
    report.iterations = total_iters;
    if (!best_x.empty()) {
        const ModeUnitary u = ev.build(best_x);
        DetectorDesign d = make_detector_design(
            problem.n_tilde, problem.ancilla_count, u, problem.accept_pattern);
        report.feasible = best_feasible;
        report.g0_squared = d.success_probability();
        report.max_cross_talk = d.max_cross_talk();
        const ReckDecomposition dec = reck_factorize(u);
        report.blocks = dec.blocks;
        report.output_phases = dec.output_phases;
        report.design = std::move(d);
    }
    return report;
}

VerifyReport verify_design(const DetectorDesign& design, int trials,
                           unsigned seed) {
    VerifyReport rep;
    rep.trials = trials;
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int top = design.n_tilde + 1;
    const double p0 = design.success_probability();
    for (int t = 0; t < trials; ++t) {
        // random 3-mode state: two measured modes plus one spectator
        std::vector<std::pair<Pattern, Amp>> terms;
        for (int a = 0; a <= top; ++a)
            for (int b = 0; b <= top; ++b)
                for (int c = 0; c <= 1; ++c)
                    terms.push_back(
                        {{a, b, c}, Amp{gauss(rng), gauss(rng)}});
        PureState psi = normalized_superpose(terms);
        const ProjectionResult ideal = ideal_bell_project(psi, 0, 1,
                                                          design.n_tilde);
        const ProjectionResult cond =
            conditional_bell_measure(psi, 0, 1, design);
        rep.max_probability_deviation =
            std::max(rep.max_probability_deviation,
                     std::abs(cond.probability - p0 * ideal.probability));
        if (ideal.state && cond.state)
            rep.max_state_deviation =
                std::max(rep.max_state_deviation,
                         global_phase_distance(*ideal.state, *cond.state));
    }
    return rep;
}

}  // namespace nsm
