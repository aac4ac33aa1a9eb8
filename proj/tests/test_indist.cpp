#include "qdcav/indist.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace qdcav::indist;

namespace {

// Independent oracle: log-spaced scan of I(Γ) over [1e-3, 1e3]·sqrt(αδ).
struct GridOptimum {
    double gamma;
    double value;
};

GridOptimum grid_search(double alpha, double delta, Model model, int points = 10000)
{
    const double centre = std::sqrt(alpha * delta);
    GridOptimum best{0.0, -1.0};
    for (int i = 0; i < points; ++i) {
        const double g = centre * std::pow(10.0, -3.0 + 6.0 * i / (points - 1));
        const double coherence = g / (g + alpha);
        const double jitter = model == Model::eq3 ? delta / (2.0 * g + delta) : delta / (g + delta);
        if (coherence * jitter > best.value) best = {g, coherence * jitter};
    }
    return best;
}

}  // namespace

TEST_CASE("indistinguishability values")
{
    CHECK(indistinguishability(7.0711, 1.0, 100.0, Model::eq3) == doctest::Approx(0.767552).epsilon(1e-5));
    CHECK(indistinguishability(7.0711, 1.0, 100.0, Model::mc_consistent) == doctest::Approx(0.818242).epsilon(1e-5));
    for (double g : {0.01, 1.0, 50.0, 1e4}) {
        CHECK(indistinguishability(g, 0.0, Relaxation::instantaneous(), Model::eq3) == 1.0);
        CHECK(indistinguishability(g, 0.0, Relaxation::instantaneous(), Model::mc_consistent) == 1.0);
    }
    CHECK(indistinguishability(1e12, 1.0, 100.0, Model::eq3) < 1e-9);
    CHECK(indistinguishability(1e12, 1.0, 100.0, Model::mc_consistent) < 1e-9);

    CHECK_THROWS_AS(indistinguishability(0.0, 1.0, 100.0, Model::eq3), std::invalid_argument);
    CHECK_THROWS_AS(indistinguishability(1.0, 1.0, 0.0, Model::eq3), std::invalid_argument);
    CHECK_THROWS_AS(indistinguishability(1.0, -1.0, 10.0, Model::eq3), std::invalid_argument);
}

TEST_CASE("closed-form optimum matches grid-search oracle")
{
    struct Case {
        double alpha, delta;
        Model model;
        double gamma_star, i_star;
    };
    // Expected values frozen from grid_search (and the closed forms agree).
    for (const auto& c : {Case{1.0, 100.0, Model::eq3, 7.0711, 0.767552},
                          Case{2.0, 100.0, Model::eq3, 10.0, 0.694444},
                          Case{1.0, 100.0, Model::mc_consistent, 10.0, 0.826446}}) {
        const auto r = optimal_rate(c.alpha, c.delta, c.model);
        CHECK(r.gamma_star == doctest::Approx(c.gamma_star).epsilon(1e-5));
        CHECK(r.i_star == doctest::Approx(c.i_star).epsilon(1e-5));
        CHECK(r.lifetime_star == doctest::Approx(1000.0 / r.gamma_star).epsilon(1e-15));
        const auto oracle = grid_search(c.alpha, c.delta, c.model);
        CHECK(std::abs(oracle.gamma / r.gamma_star - 1.0) < 0.005);
        CHECK(oracle.value == doctest::Approx(r.i_star).epsilon(1e-6));
    }
    CHECK(optimal_rate(1.0, 100.0, Model::eq3).lifetime_star == doctest::Approx(141.42).epsilon(1e-4));
    CHECK(optimal_rate(2.0, 100.0, Model::eq3).lifetime_star == doctest::Approx(100.0).epsilon(1e-12));
    CHECK_THROWS_AS(optimal_rate(0.0, 100.0, Model::eq3), std::invalid_argument);
    CHECK_THROWS_AS(optimal_rate(1.0, -1.0, Model::eq3), std::invalid_argument);
}

TEST_CASE("closed form agrees with oracle over random rates")
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> alpha(0.1, 10.0), delta(10.0, 1000.0);
    for (int i = 0; i < 100; ++i) {
        const double a = alpha(gen), d = delta(gen);
        for (Model m : {Model::eq3, Model::mc_consistent}) {
            const auto r = optimal_rate(a, d, m);
            const auto oracle = grid_search(a, d, m);
            CHECK(std::abs(oracle.gamma / r.gamma_star - 1.0) < 0.005);
            CHECK(oracle.value <= r.i_star + 1e-12);
        }
    }
}

TEST_CASE("unimodal in gamma")
{
    for (Model m : {Model::eq3, Model::mc_consistent}) {
        for (auto [a, d] : {std::pair{1.0, 100.0}, std::pair{0.3, 20.0}, std::pair{5.0, 900.0}}) {
            int sign_changes = 0;
            double prev_slope = 0.0;
            double prev = indistinguishability(1e-3, a, d, m);
            for (int i = 1; i < 4000; ++i) {
                const double g = 1e-3 * std::pow(10.0, 7.0 * i / 3999.0);
                const double v = indistinguishability(g, a, d, m);
                const double slope = v - prev;
                if (i > 1 && (slope > 0) != (prev_slope > 0)) ++sign_changes;
                prev_slope = slope;
                prev = v;
            }
            CHECK(sign_changes == 1);
        }
    }
}

TEST_CASE("scale-free in rates and monotone in alpha, delta")
{
    for (Model m : {Model::eq3, Model::mc_consistent}) {
        const double base = indistinguishability(7.0, 1.0, 100.0, m);
        const auto opt = optimal_rate(1.0, 100.0, m);
        for (double s : {1e-3, 0.5, 3.0, 1e4}) {
            CHECK(indistinguishability(7.0 * s, 1.0 * s, 100.0 * s, m) == doctest::Approx(base).epsilon(1e-13));
            const auto scaled = optimal_rate(s, 100.0 * s, m);
            CHECK(scaled.gamma_star == doctest::Approx(s * opt.gamma_star).epsilon(1e-13));
            CHECK(scaled.i_star == doctest::Approx(opt.i_star).epsilon(1e-13));
        }
        double prev = 2.0;
        for (double a = 0.0; a < 10.0; a += 0.5) {
            const double v = indistinguishability(7.0, a, 100.0, m);
            CHECK(v < prev);
            prev = v;
        }
        prev = -1.0;
        for (double d = 1.0; d < 1e4; d *= 2.0) {
            const double v = indistinguishability(7.0, 1.0, d, m);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("phonon what-if")
{
    const auto r = phonon_whatif(1.25, 100.0, 10.0, Model::eq3);
    CHECK(r.i_star == doctest::Approx(0.907029).epsilon(1e-6));
    CHECK(r.lifetime_star == doctest::Approx(40.0).epsilon(1e-12));
    const auto oracle = grid_search(1.25, 1000.0, Model::eq3);
    CHECK(std::abs(oracle.gamma / r.gamma_star - 1.0) < 0.005);

    const auto same = phonon_whatif(1.0, 100.0, 1.0, Model::eq3);
    const auto direct = optimal_rate(1.0, 100.0, Model::eq3);
    CHECK(same.gamma_star == direct.gamma_star);
    CHECK(same.i_star == direct.i_star);

    CHECK(phonon_whatif(1.0, 100.0, 1e12, Model::eq3).i_star > 0.9999);
    CHECK_THROWS_AS(phonon_whatif(1.0, 100.0, 0.5, Model::eq3), std::invalid_argument);
}

TEST_CASE("model names")
{
    CHECK(parse_model("eq3") == Model::eq3);
    CHECK(parse_model("mc-consistent") == Model::mc_consistent);
    CHECK(to_string(Model::mc_consistent) == "mc-consistent");
    CHECK_THROWS_AS(parse_model("other"), std::invalid_argument);
    CHECK_THROWS_AS(Relaxation::instantaneous().value(), std::logic_error);
}
