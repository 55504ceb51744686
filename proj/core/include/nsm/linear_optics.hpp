#pragma once

#include <vector>

#include "nsm/fock.hpp"

namespace nsm {

// One two-mode element, a beam splitter combined with phase shifters.
// Canonical form keeps c, s >= 0; a negative s supplied by the caller is
// absorbed into the phases (s, eta, xi) -> (-s, -eta, -xi), which leaves
// the 2x2 block unchanged. A negative c is not representable in this
// parameterization and is rejected.
struct BeamSplitterSpec {
    double c = 1.0;
    double s = 0.0;
    Amp eta{1.0, 0.0};
    Amp xi{1.0, 0.0};
    int mode_i = 0;
    int mode_j = 1;

    BeamSplitterSpec(double c, double s, Amp eta, Amp xi, int mode_i,
                     int mode_j);
};

// M x M complex matrix acting on mode creation operators with the
// convention that inputs are expressed in terms of outputs:
//   a_i^dag = sum_j U_ij a'_j^dag.
// Checked unitary on construction.
class ModeUnitary {
public:
    ModeUnitary(int dim, std::vector<Amp> row_major);

    static ModeUnitary identity(int dim);

    int dim() const { return dim_; }
    const Amp& at(int i, int j) const { return m_[i * dim_ + j]; }
    const std::vector<Amp>& data() const { return m_; }

    // Expands to a larger mode count, acting on the listed modes.
    ModeUnitary embed(int total_modes, const std::vector<int>& modes) const;

    ModeUnitary adjoint() const;

    // "row-major, re+im" text form for golden files.
    std::string to_text() const;

private:
    int dim_;
    std::vector<Amp> m_;
};

ModeUnitary beam_splitter(const BeamSplitterSpec& spec, int total_modes);
ModeUnitary phase_shifter(double phi, int mode, int total_modes);

// Matrix product first * second. With the creation-operator convention
// above, compose(A, B) describes light passing element A first.
ModeUnitary compose(const ModeUnitary& first, const ModeUnitary& second);

// Exact amplitudes of the transformed state via the substitution
// a_i^dag -> sum_j U_ij a'_j^dag applied to every basis component.
// Photon number is conserved componentwise; throws if an output pattern
// would exceed the state's cutoff.
PureState apply(const ModeUnitary& u, const PureState& state);

// Factorization of an arbitrary mode unitary into two-mode blocks plus a
// diagonal phase layer. Verification aid, not on the simulation path.
struct ReckDecomposition {
    std::vector<BeamSplitterSpec> blocks;  // applied left to right
    std::vector<double> output_phases;     // final diagonal layer

    ModeUnitary rebuild(int dim) const;
};

ReckDecomposition reck_factorize(const ModeUnitary& u);

}  // namespace nsm
