#include "nsm/linear_optics.hpp"

#include <cmath>
#include <sstream>

namespace nsm {

BeamSplitterSpec::BeamSplitterSpec(double c_in, double s_in, Amp eta_in,
                                   Amp xi_in, int i, int j)
    : c(c_in), s(s_in), eta(eta_in), xi(xi_in), mode_i(i), mode_j(j) {
    if (mode_i == mode_j || mode_i < 0 || mode_j < 0)
        throw std::invalid_argument("BeamSplitterSpec: invalid mode pair");
    if (c < 0.0)
        throw std::domain_error(
            "BeamSplitterSpec: c < 0 is not representable; fold the sign "
            "into a phase shifter");
    if (s < 0.0) {  // (s, eta, xi) -> (-s, -eta, -xi) preserves the block
        s = -s;
        eta = -eta;
        xi = -xi;
    }
    if (std::abs(c * c + s * s - 1.0) > kTol)
        throw std::domain_error("BeamSplitterSpec: c^2 + s^2 != 1");
    if (std::abs(std::abs(eta) - 1.0) > kTol ||
        std::abs(std::abs(xi) - 1.0) > kTol)
        throw std::domain_error("BeamSplitterSpec: |eta| and |xi| must be 1");
}

ModeUnitary::ModeUnitary(int dim, std::vector<Amp> row_major)
    : dim_(dim), m_(std::move(row_major)) {
    if (dim_ <= 0 || m_.size() != static_cast<size_t>(dim_) * dim_)
        throw std::invalid_argument("ModeUnitary: bad dimensions");
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            Amp dot{0.0, 0.0};
            for (int k = 0; k < dim_; ++k)
                dot += std::conj(at(k, i)) * at(k, j);
            double want = i == j ? 1.0 : 0.0;
            if (std::abs(dot - want) > kTol)
                throw std::domain_error("ModeUnitary: matrix is not unitary");
        }
    }
}

ModeUnitary ModeUnitary::identity(int dim) {
    std::vector<Amp> m(static_cast<size_t>(dim) * dim, Amp{0.0, 0.0});
    for (int i = 0; i < dim; ++i) m[i * dim + i] = Amp{1.0, 0.0};
    return ModeUnitary(dim, std::move(m));
}

ModeUnitary ModeUnitary::embed(int total_modes,
                               const std::vector<int>& modes) const {
    if (static_cast<int>(modes.size()) != dim_)
        throw std::invalid_argument("ModeUnitary::embed: mode list size");
    std::vector<Amp> m(static_cast<size_t>(total_modes) * total_modes,
                       Amp{0.0, 0.0});
    std::vector<bool> used(total_modes, false);
    for (int mode : modes) {
        if (mode < 0 || mode >= total_modes || used[mode])
            throw std::invalid_argument("ModeUnitary::embed: bad mode index");
        used[mode] = true;
    }
    for (int i = 0; i < total_modes; ++i)
        if (!used[i]) m[static_cast<size_t>(i) * total_modes + i] = Amp{1.0, 0.0};
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            m[static_cast<size_t>(modes[i]) * total_modes + modes[j]] = at(i, j);
    return ModeUnitary(total_modes, std::move(m));
}

ModeUnitary ModeUnitary::adjoint() const {
    std::vector<Amp> m(m_.size());
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            m[static_cast<size_t>(j) * dim_ + i] = std::conj(at(i, j));
    return ModeUnitary(dim_, std::move(m));
}

std::string ModeUnitary::to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j)
            os << at(i, j).real() << ' ' << at(i, j).imag()
               << (j + 1 < dim_ ? "  " : "");
        os << '\n';
    }
    return os.str();
}

ModeUnitary beam_splitter(const BeamSplitterSpec& spec, int total_modes) {
    if (spec.mode_i >= total_modes || spec.mode_j >= total_modes)
        throw std::out_of_range("beam_splitter: mode index out of range");
    std::vector<Amp> m(static_cast<size_t>(total_modes) * total_modes,
                       Amp{0.0, 0.0});
    for (int k = 0; k < total_modes; ++k)
        m[static_cast<size_t>(k) * total_modes + k] = Amp{1.0, 0.0};
    const int i = spec.mode_i, j = spec.mode_j;
    m[static_cast<size_t>(i) * total_modes + i] = spec.c;
    m[static_cast<size_t>(i) * total_modes + j] = -spec.s * spec.eta;
    m[static_cast<size_t>(j) * total_modes + i] = spec.s * spec.xi;
    m[static_cast<size_t>(j) * total_modes + j] = spec.c * spec.eta * spec.xi;
    return ModeUnitary(total_modes, std::move(m));
}

ModeUnitary phase_shifter(double phi, int mode, int total_modes) {
    if (mode < 0 || mode >= total_modes)
        throw std::out_of_range("phase_shifter: mode index out of range");
    std::vector<Amp> m(static_cast<size_t>(total_modes) * total_modes,
                       Amp{0.0, 0.0});
    for (int k = 0; k < total_modes; ++k)
        m[static_cast<size_t>(k) * total_modes + k] = Amp{1.0, 0.0};
    m[static_cast<size_t>(mode) * total_modes + mode] =
        std::polar(1.0, phi);
    return ModeUnitary(total_modes, std::move(m));
}

ModeUnitary compose(const ModeUnitary& first, const ModeUnitary& second) {
    if (first.dim() != second.dim())
        throw std::invalid_argument("compose: dimension mismatch");
    const int n = first.dim();
    std::vector<Amp> m(static_cast<size_t>(n) * n, Amp{0.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Amp f = first.at(i, k);
            if (f == Amp{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j)
                m[static_cast<size_t>(i) * n + j] += f * second.at(k, j);
        }
    return ModeUnitary(n, std::move(m));
}

PureState apply(const ModeUnitary& u, const PureState& state) {
    if (u.dim() != state.mode_count())
        throw std::invalid_argument("apply: dimension mismatch");
    const int M = u.dim();
    AmpMap out;
    for (const auto& [pattern, amp] : state.terms()) {
        // Seed with c / sqrt(prod n_i!) and grow one creation operator at
        // a time; a^dag |m> = sqrt(m+1) |m+1> supplies the output factorials.
        double fact = 1.0;
        for (int n : pattern)
            for (int k = 2; k <= n; ++k) fact *= k;
        AmpMap poly;
        poly.emplace(Pattern(M, 0), amp / std::sqrt(fact));
        for (int i = 0; i < M; ++i) {
            for (int rep = 0; rep < pattern[i]; ++rep) {
                AmpMap next;
                for (const auto& [p, coef] : poly) {
                    for (int j = 0; j < M; ++j) {
                        const Amp& uij = u.at(i, j);
                        if (uij == Amp{0.0, 0.0}) continue;
                        Pattern q = p;
                        ++q[j];
                        if (q[j] > state.cutoff())
                            throw std::domain_error(
                                "apply: output pattern exceeds cutoff");
                        next[std::move(q)] +=
                            coef * uij * std::sqrt(static_cast<double>(p[j] + 1));
                    }
                }
                poly = std::move(next);
            }
        }
        for (const auto& [p, coef] : poly) out[p] += coef;
    }
    return PureState(M, std::move(out), state.cutoff());
}

ModeUnitary ReckDecomposition::rebuild(int dim) const {
    ModeUnitary u = ModeUnitary::identity(dim);
    for (const auto& spec : blocks) u = compose(u, beam_splitter(spec, dim));
    for (int k = 0; k < dim; ++k)
        u = compose(u, phase_shifter(output_phases[k], k, dim));
    return u;
}

ReckDecomposition reck_factorize(const ModeUnitary& u) {
    // Givens-style elimination: left-multiply by blocks
    //   B(theta, phi) = [[cos, -sin e^{i phi}], [sin e^{-i phi}, cos]]
    // on rows (i-1, i) to zero the subdiagonal column by column. The
    // residual is diagonal, and U = B_1^dag ... B_n^dag D.
    const int n = u.dim();
    std::vector<Amp> work = u.data();
    auto at = [&](int i, int j) -> Amp& {
        return work[static_cast<size_t>(i) * n + j];
    };
    ReckDecomposition dec;
    std::vector<std::pair<std::pair<int, int>, std::pair<double, double>>> steps;
    for (int col = 0; col < n - 1; ++col) {
        for (int row = n - 1; row > col; --row) {
            const int p = row - 1, q = row;
            const Amp a = at(p, col), b = at(q, col);
            double theta, phi;
            if (std::abs(b) < 1e-300) continue;
            if (std::abs(a) < 1e-300) {
                theta = M_PI / 2.0;
                phi = 0.0;
            } else {
                const Amp ratio = -b / a;
                theta = std::atan(std::abs(ratio));
                phi = -std::arg(ratio);
            }
            const double c = std::cos(theta), s = std::sin(theta);
            const Amp ep = std::polar(1.0, phi);
            for (int j = 0; j < n; ++j) {
                const Amp rp = at(p, j), rq = at(q, j);
                at(p, j) = c * rp - s * ep * rq;
                at(q, j) = s * std::conj(ep) * rp + c * rq;
            }
            steps.push_back({{p, q}, {theta, phi}});
        }
    }
    // U = B_1^dag B_2^dag ... D; B(theta,phi)^dag = B(-theta,phi), which the
    // spec constructor canonicalizes back to s >= 0.
    for (const auto& [modes, angles] : steps) {
        const auto [theta, phi] = angles;
        dec.blocks.emplace_back(std::cos(theta), -std::sin(theta),
                                std::polar(1.0, phi), std::polar(1.0, -phi),
                                modes.first, modes.second);
    }
    dec.output_phases.resize(n);
    for (int k = 0; k < n; ++k) dec.output_phases[k] = std::arg(at(k, k));
    return dec;
}

}  // namespace nsm
