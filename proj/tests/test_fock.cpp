#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nsm/fock.hpp"

using namespace nsm;

namespace {

PureState random_state(std::mt19937& rng, int modes, int max_photons) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::pair<Pattern, Amp>> terms;
    Pattern p(modes, 0);
    // enumerate all patterns with per-mode count <= max_photons
    while (true) {
        terms.push_back({p, Amp{gauss(rng), gauss(rng)}});
        int k = modes - 1;
        while (k >= 0 && ++p[k] > max_photons) p[k--] = 0;
        if (k < 0) break;
    }
    return normalized_superpose(terms);
}

}  // namespace

TEST_CASE("basis states") {
    const PureState vac = make_basis_state({0, 0});
    CHECK(vac.mode_count() == 2);
    CHECK(vac.amplitude({0, 0}) == Amp{1.0, 0.0});
    CHECK(vac.is_normalized());

    const PureState two = make_basis_state({2, 0});
    CHECK(two.amplitude({2, 0}) == Amp{1.0, 0.0});
    CHECK(make_basis_state({1, 1, 0}).mode_count() == 3);

    CHECK_THROWS_AS(make_basis_state({-1}), std::domain_error);
}

TEST_CASE("superpose") {
    const double s = 1.0 / std::sqrt(2.0);
    const PureState bell =
        superpose({{{1, 0}, Amp{s, 0}}, {{0, 1}, Amp{s, 0}}});
    CHECK(bell.is_normalized());
    CHECK(bell.amplitude({1, 0}).real() == doctest::Approx(s));

    // duplicates are summed
    const PureState summed =
        superpose({{{0}, Amp{0.25, 0}}, {{0}, Amp{0.25, 0}}});
    CHECK(summed.amplitude({0}).real() == doctest::Approx(0.5));

    CHECK_THROWS_AS(superpose({{{1, 0}, Amp{1, 0}}, {{1, 0}, Amp{-1, 0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(superpose({{{1, 0}, Amp{1, 0}}, {{1}, Amp{1, 0}}}),
                    std::invalid_argument);
}

TEST_CASE("state invariants") {
    // norm > 1 rejected
    CHECK_THROWS_AS(superpose({{{0}, Amp{1, 0}}, {{1}, Amp{0.5, 0}}}),
                    std::invalid_argument);
    // sub-normalized accepted, flag cleared
    const PureState sub = superpose({{{0}, Amp{0.5, 0}}});
    CHECK(!sub.is_normalized());
    CHECK(sub.squared_norm() == doctest::Approx(0.25));
    CHECK(sub.normalized().is_normalized());
    // pruning
    const PureState pruned =
        superpose({{{0}, Amp{1, 0}}, {{1}, Amp{1e-16, 0}}});
    CHECK(pruned.terms().size() == 1);
}

TEST_CASE("inner product") {
    const double s = 1.0 / std::sqrt(2.0);
    const PureState b10 =
        superpose({{{1, 0}, Amp{s, 0}}, {{0, 1}, Amp{s, 0}}});
    const PureState b11 =
        superpose({{{1, 0}, Amp{s, 0}}, {{0, 1}, Amp{-s, 0}}});
    CHECK(std::abs(inner_product(b10, b11)) < 1e-14);

    const PureState zero = make_basis_state({0});
    const PureState plus = superpose({{{0}, Amp{s, 0}}, {{1}, Amp{s, 0}}});
    CHECK(inner_product(zero, plus).real() == doctest::Approx(s));

    CHECK_THROWS_AS(inner_product(zero, b10), std::invalid_argument);
}

TEST_CASE("inner product and projection against dense oracle") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const PureState a = random_state(rng, 3, 2);
        const PureState b = random_state(rng, 3, 2);
        // dense enumeration
        Amp dense{0, 0};
        Pattern p(3, 0);
        while (true) {
            dense += std::conj(a.amplitude(p)) * b.amplitude(p);
            int k = 2;
            while (k >= 0 && ++p[k] > 2) p[k--] = 0;
            if (k < 0) break;
        }
        CHECK(std::abs(inner_product(a, b) - dense) < 1e-12);
        CHECK(std::abs(inner_product(a, b) -
                       std::conj(inner_product(b, a))) < 1e-14);

        // projection probability oracle on mode 1
        for (int n = 0; n <= 2; ++n) {
            double dense_p = 0.0;
            Pattern q(3, 0);
            while (true) {
                if (q[1] == n) dense_p += std::norm(a.amplitude(q));
                int k = 2;
                while (k >= 0 && ++q[k] > 2) q[k--] = 0;
                if (k < 0) break;
            }
            CHECK(projection_probability(a, {1}, {n}) ==
                  doctest::Approx(dense_p).epsilon(1e-12));
        }
    }
}

TEST_CASE("tensor") {
    const double s = 1.0 / std::sqrt(2.0);
    const PureState v = make_basis_state({0});
    CHECK(tensor(v, v).amplitude({0, 0}) == Amp{1.0, 0.0});

    const PureState plus = superpose({{{0}, Amp{s, 0}}, {{1}, Amp{s, 0}}});
    const PureState one = make_basis_state({1});
    const PureState prod = tensor(plus, one);
    CHECK(prod.amplitude({0, 1}).real() == doctest::Approx(s));
    CHECK(prod.amplitude({1, 1}).real() == doctest::Approx(s));

    std::mt19937 rng(11);
    const PureState a = random_state(rng, 2, 2);
    const PureState b = random_state(rng, 1, 3);
    const PureState c = random_state(rng, 2, 1);
    CHECK(tensor(a, b).squared_norm() ==
          doctest::Approx(a.squared_norm() * b.squared_norm()).epsilon(1e-12));
    // associativity
    const PureState left = tensor(tensor(a, b), c);
    const PureState right = tensor(a, tensor(b, c));
    for (const auto& [pattern, amp] : left.terms())
        CHECK(std::abs(amp - right.amplitude(pattern)) < 1e-14);
}

TEST_CASE("projection") {
    const double s = 1.0 / std::sqrt(2.0);
    const PureState bell =
        superpose({{{1, 0}, Amp{s, 0}}, {{0, 1}, Amp{s, 0}}});
    const ProjectionResult res = project_modes(bell, {1}, {0});
    CHECK(res.probability == doctest::Approx(0.5));
    REQUIRE(res.state.has_value());
    CHECK(std::abs(res.state->amplitude({1}) - Amp{1.0, 0.0}) < 1e-14);

    CHECK(projection_probability(make_basis_state({0, 0}), {0, 1}, {0, 0}) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(project_modes(bell, {0, 1}, {0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(project_modes(bell, {0, 3}, {0, 0}), std::out_of_range);

    // probabilities over all outcomes of a measured mode sum to norm^2
    std::mt19937 rng(3);
    const PureState a = random_state(rng, 3, 2);
    double total = 0.0;
    for (int n = 0; n <= 2; ++n)
        total += project_modes(a, {0}, {n}).probability;
    CHECK(total == doctest::Approx(a.squared_norm()).epsilon(1e-12));
}

TEST_CASE("project onto a two-mode state") {
    const double s = 1.0 / std::sqrt(2.0);
    const PureState bell =
        superpose({{{1, 0}, Amp{s, 0}}, {{0, 1}, Amp{s, 0}}});
    // |1,0,0> projected on the bell pair over modes (0,1) leaves |0>
    const PureState in = make_basis_state({1, 0, 0});
    const ProjectionResult res = project_onto_state(in, {0, 1}, bell);
    CHECK(res.probability == doctest::Approx(0.5));
    REQUIRE(res.state.has_value());
    CHECK(std::abs(res.state->amplitude({0}) - Amp{1.0, 0.0}) < 1e-14);
}

TEST_CASE("text serialization round trip") {
    std::mt19937 rng(5);
    const PureState a = random_state(rng, 3, 2);
    const PureState back = PureState::from_text(a.to_text());
    CHECK(back.mode_count() == a.mode_count());
    for (const auto& [pattern, amp] : a.terms())
        CHECK(std::abs(amp - back.amplitude(pattern)) < 1e-15);
    CHECK(a.to_text() == back.to_text());

    CHECK_THROWS_AS(PureState::from_text(""), std::invalid_argument);
    CHECK_THROWS_AS(PureState::from_text("1 0\n"), std::invalid_argument);
}
