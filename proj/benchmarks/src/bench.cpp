#include <benchmark/benchmark.h>

#include <random>

#include "nsm/epr.hpp"
#include "nsm/linear_optics.hpp"
#include "nsm/teleport.hpp"

using namespace nsm;

namespace {

ModeUnitary dense_unitary(int dim) {
    std::mt19937 rng(1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<Amp>> cols(dim, std::vector<Amp>(dim));
    for (auto& col : cols)
        for (auto& v : col) v = Amp{gauss(rng), gauss(rng)};
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < j; ++k) {
            Amp dot{0, 0};
            for (int i = 0; i < dim; ++i)
                dot += std::conj(cols[k][i]) * cols[j][i];
            for (int i = 0; i < dim; ++i) cols[j][i] -= dot * cols[k][i];
        }
        double n = 0.0;
        for (int i = 0; i < dim; ++i) n += std::norm(cols[j][i]);
        n = std::sqrt(n);
        for (int i = 0; i < dim; ++i) cols[j][i] /= n;
    }
    std::vector<Amp> m(dim * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m[i * dim + j] = cols[j][i];
    return ModeUnitary(dim, std::move(m));
}

PureState dense_state(int modes, int per_mode) {
    std::mt19937 rng(2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::pair<Pattern, Amp>> terms;
    Pattern p(modes, 0);
    while (true) {
        terms.push_back({p, Amp{gauss(rng), gauss(rng)}});
        int k = modes - 1;
        while (k >= 0 && ++p[k] > per_mode) p[k--] = 0;
        if (k < 0) break;
    }
    return normalized_superpose(terms);
}

void BM_Apply(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    const ModeUnitary u = dense_unitary(modes);
    const PureState psi = dense_state(modes, 2);
    for (auto _ : state) benchmark::DoNotOptimize(apply(u, psi));
}
BENCHMARK(BM_Apply)->Arg(2)->Arg(3)->Arg(4);

void BM_Teleport(benchmark::State& state) {
    const int n_tilde = static_cast<int>(state.range(0));
    const PureState psi = dense_state(1, n_tilde + 1);
    const PureState epr = squeezed_vacuum(0.7);
    for (auto _ : state)
        benchmark::DoNotOptimize(teleport(psi, 0, epr, n_tilde));
}
BENCHMARK(BM_Teleport)->Arg(1)->Arg(2)->Arg(4);

void BM_SwapPreparation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(prepare_via_swapping(0.5, 0.7, n, 0));
}
BENCHMARK(BM_SwapPreparation)->Arg(1)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
