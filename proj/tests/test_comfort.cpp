#include <doctest.h>

#include <limits>
#include <stdexcept>

#include <random>

#include "heatcoord/comfort.hpp"
#include "support/oracles.hpp"

using namespace heatcoord;

namespace {

ComfortSpec uniform_comfort(int n, double lo, double hi, bool home = true) {
    ComfortSpec c;
    c.lower.assign(n, lo);
    c.upper.assign(n, hi);
    c.reference.assign(n, 0.5 * (lo + hi));
    c.at_home.assign(n, home ? 1 : 0);
    return c;
}

}  // namespace

TEST_CASE("comfort_flexibility") {
    auto c = uniform_comfort(3, 19.0, 22.0);
    auto e = comfort_flexibility(c);
    for (double v : e) CHECK(v == doctest::Approx(1.0 / 3.0));

    c = uniform_comfort(3, 5.0, 30.0);
    e = comfort_flexibility(c);
    for (double v : e) CHECK(v == doctest::Approx(0.04));

    c.upper[1] = c.lower[1];
    CHECK_THROWS_AS(comfort_flexibility(c), std::invalid_argument);
}

TEST_CASE("comfort_index") {
    const int n = 4;
    auto c = uniform_comfort(n, 19.0, 22.0);
    const std::vector<double> e(n, 1.0);

    SUBCASE("zero deviation scores zero") {
        CHECK(comfort_index(c.reference, c, e) == 0.0);
    }
    SUBCASE("unit deviation everywhere scores -1") {
        std::vector<double> trace(n, c.reference[0] + 1.0);
        CHECK(comfort_index(trace, c, e) == doctest::Approx(-1.0));
    }
    SUBCASE("index is homogeneous in the flexibility weights") {
        std::vector<double> trace = {20.0, 21.2, 19.4, 22.0};
        std::vector<double> e2(n, 2.0);
        CHECK(comfort_index(trace, c, e2) ==
              doctest::Approx(2.0 * comfort_index(trace, c, e)));
    }
    SUBCASE("away steps contribute nothing") {
        c.at_home = {1, 0, 0, 1};
        std::vector<double> trace = {20.5, 35.0, -10.0, 20.5};
        CHECK(comfort_index(trace, c, e) == 0.0);
    }
}

TEST_CASE("theta_feasibility") {
    std::mt19937_64 rng(51);

    SUBCASE("all-ON schedule has no candidate") {
        auto inst = oracle::random_instance(rng, 6);
        inst.schedule.assign(6, 1);
        inst.trace = oracle::recursion_trace(inst.initial_temp, inst.schedule, inst.params);
        for (int t = 0; t < 6; ++t) inst.comfort.upper[t] = inst.trace[t] + 50.0;
        const auto f = theta_feasibility(inst.schedule, inst.trace, inst.comfort, inst.mats);
        for (auto v : f.theta) CHECK(v == 0);
        for (auto v : f.theta_a) CHECK(v == 0);
    }
    SUBCASE("zero headroom after t0 blocks it") {
        auto inst = oracle::random_instance(rng, 6);
        int t0 = -1;
        for (int t = 0; t < 5; ++t)
            if (!inst.schedule[t]) t0 = t;
        REQUIRE(t0 >= 0);
        inst.comfort.upper[5] = inst.trace[5];   // no room at a later step
        const auto f = theta_feasibility(inst.schedule, inst.trace, inst.comfort, inst.mats);
        CHECK(f.theta[t0] == 0);
    }
    SUBCASE("matches the switch-on-and-repropagate oracle") {
        std::mt19937_64 rng2(52);
        for (int rep = 0; rep < 300; ++rep) {
            const int n = std::uniform_int_distribution<int>(4, 8)(rng2);
            auto inst = oracle::random_instance(rng2, n);
            const auto f = theta_feasibility(inst.schedule, inst.trace, inst.comfort, inst.mats);
            const auto brute =
                oracle::theta_brute(inst.schedule, inst.initial_temp, inst.params, inst.comfort);
            for (int t = 0; t < n; ++t) CHECK(f.theta[t] == brute[t]);
        }
    }
}

TEST_CASE("comfort_gain") {
    SUBCASE("no thermal effect, no gain") {
        ThermalParams p;
        p.psi = 0.5;
        p.gamma = 1e-300;   // effectively zero coupling
        p.rated_power_kw = 3.0;
        p.dt_hours = 0.25;
        p.upsilon.assign(4, 0.5);
        auto m = build_propagation_matrices(p);
        m.gamma = 0.0;   // exact zero column
        const auto c = uniform_comfort(4, 10.0, 30.0);
        const std::vector<double> e(4, 1.0);
        const std::vector<double> trace = {15.0, 14.0, 13.0, 12.0};
        CHECK(comfort_gain(trace, c, e, m, 1) == 0.0);
    }
    SUBCASE("uniform deficit fully healed from t0 on") {
        // psi = 1 makes every Gamma entry equal to gamma = 1
        ThermalParams p;
        p.psi = 1.0;
        p.gamma = 1.0;
        p.rated_power_kw = 3.0;
        p.dt_hours = 0.25;
        p.upsilon.assign(8, 0.0);
        const auto m = build_propagation_matrices(p);
        auto c = uniform_comfort(8, 15.0, 25.0);
        std::vector<double> trace(8, c.reference[0] - 1.0);
        const std::vector<double> e(8, 1.0);
        const int t0 = 3;
        CHECK(comfort_gain(trace, c, e, m, t0) == doctest::Approx((8.0 - t0) / 8.0));
    }
    SUBCASE("equals the index difference computed independently") {
        std::mt19937_64 rng(53);
        for (int rep = 0; rep < 100; ++rep) {
            const int n = std::uniform_int_distribution<int>(4, 10)(rng);
            auto inst = oracle::random_instance(rng, n);
            const auto e = comfort_flexibility(inst.comfort);
            int t0 = -1;
            for (int t = 0; t < n; ++t)
                if (!inst.schedule[t]) t0 = t;
            if (t0 < 0) continue;
            const double gain = comfort_gain(inst.trace, inst.comfort, e, inst.mats, t0);
            Schedule flipped = inst.schedule;
            flipped[t0] = 1;
            const auto post = oracle::recursion_trace(inst.initial_temp, flipped, inst.params);
            const double expect = comfort_index(post, inst.comfort, e) -
                                  comfort_index(inst.trace, inst.comfort, e);
            CHECK(gain == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("select_compensation") {
    SUBCASE("empty candidate set") {
        CHECK_FALSE(select_compensation({0, 0, 0}, {1.0, 1.0, 1.0}, 10.0, {1.0, 1.0, 1.0})
                        .has_value());
    }
    SUBCASE("best gain per pound wins") {
        std::vector<std::uint8_t> theta = {0, 0, 0, 1, 0, 1};
        std::vector<double> cost = {0, 0, 0, 0.01, 0, 0.02};
        std::vector<double> gain = {0, 0, 0, 0.2, 0, 0.3};
        const auto c = select_compensation(theta, cost, 1.0, gain);
        REQUIRE(c.has_value());
        CHECK(c->t0 == 3);   // ratio 20 beats 15
    }
    SUBCASE("compensation may not eat the whole saving") {
        std::vector<std::uint8_t> theta = {1, 1};
        std::vector<double> cost = {0.5, 0.7};
        std::vector<double> gain = {1.0, 1.0};
        CHECK_FALSE(select_compensation(theta, cost, 0.5, gain).has_value());
    }
    SUBCASE("negative gains are never selected") {
        std::vector<std::uint8_t> theta = {1, 1};
        std::vector<double> cost = {0.1, 0.1};
        std::vector<double> gain = {-0.5, 0.0};
        CHECK_FALSE(select_compensation(theta, cost, 1.0, gain).has_value());
    }
}

TEST_CASE("apply_compensation") {
    std::mt19937_64 rng(54);

    SUBCASE("matches full repropagation and respects the upper bound") {
        for (int rep = 0; rep < 50; ++rep) {
            const int n = 8;
            auto inst = oracle::random_instance(rng, n);
            const auto f = theta_feasibility(inst.schedule, inst.trace, inst.comfort, inst.mats);
            int t0 = -1;
            for (int t = 0; t < n; ++t)
                if (f.theta[t]) t0 = t;
            if (t0 < 0) continue;
            apply_compensation(inst.schedule, inst.trace, inst.mats, t0);
            const auto expect =
                oracle::recursion_trace(inst.initial_temp, inst.schedule, inst.params);
            for (int t = 0; t < n; ++t) {
                CHECK(inst.trace[t] == doctest::Approx(expect[t]).epsilon(1e-9));
                CHECK(inst.trace[t] <= inst.comfort.upper[t] + 1e-9);
            }
        }
    }
    SUBCASE("revert restores the trace") {
        auto inst = oracle::random_instance(rng, 8);
        int t0 = -1;
        for (int t = 0; t < 8; ++t)
            if (!inst.schedule[t]) t0 = t;
        REQUIRE(t0 >= 0);
        const auto trace0 = inst.trace;
        apply_compensation(inst.schedule, inst.trace, inst.mats, t0);
        inst.schedule[t0] = 0;
        for (int i = t0; i < 8; ++i) inst.trace[i] -= inst.mats.gamma_at(i, t0);
        for (int t = 0; t < 8; ++t)
            CHECK(inst.trace[t] == doctest::Approx(trace0[t]).epsilon(1e-9));
    }
    SUBCASE("heater already ON is a contract error") {
        auto inst = oracle::random_instance(rng, 6);
        inst.schedule[2] = 1;
        CHECK_THROWS_AS(apply_compensation(inst.schedule, inst.trace, inst.mats, 2),
                        std::logic_error);
    }
}

TEST_CASE("find_best_compensation equals the vector route") {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = std::uniform_int_distribution<int>(4, 12)(rng);
        auto inst = oracle::random_instance(rng, n);
        const auto e = comfort_flexibility(inst.comfort);
        const double saving = std::uniform_real_distribution<double>(0.0, 0.05)(rng);

        const auto f = theta_feasibility(inst.schedule, inst.trace, inst.comfort, inst.mats);
        const auto cost =
            compensation_cost(inst.price, f.theta, inst.params.rated_power_kw,
                              inst.params.dt_hours);
        std::vector<double> gains(n, 0.0);
        for (int t = 0; t < n; ++t)
            if (f.theta[t]) gains[t] = comfort_gain(inst.trace, inst.comfort, e, inst.mats, t);
        const auto via_vectors = select_compensation(f.theta, cost, saving, gains);

        const auto fused =
            find_best_compensation(inst.schedule, inst.trace, inst.comfort, e, inst.mats,
                                   inst.price, inst.params.rated_power_kw,
                                   inst.params.dt_hours, saving);
        REQUIRE(via_vectors.has_value() == fused.has_value());
        if (via_vectors) {
            CHECK(via_vectors->t0 == fused->t0);
            CHECK(via_vectors->cost_gbp == doctest::Approx(fused->cost_gbp).epsilon(1e-12));
            CHECK(via_vectors->gain == doctest::Approx(fused->gain).epsilon(1e-12));
        }
    }
}

TEST_CASE("constant and time-varying flexibility can rank traces differently") {
    // Two-step day: a wide band early, a narrow band late. The time-varying
    // index prefers the trace that protects the narrow step; a constant
    // weight prefers the smaller total deviation.
    ComfortSpec c;
    c.lower = {18.0, 19.0};
    c.upper = {22.0, 21.0};
    c.reference = {20.0, 20.0};
    c.at_home = {1, 1};
    const auto e_var = comfort_flexibility(c);       // {0.25, 0.5}
    const std::vector<double> e_const(2, 1.0);

    const std::vector<double> trace_a = {21.0, 20.0};   // deviation on the wide step
    const std::vector<double> trace_b = {20.0, 20.9};   // deviation on the narrow step

    const double var_a = comfort_index(trace_a, c, e_var);
    const double var_b = comfort_index(trace_b, c, e_var);
    const double const_a = comfort_index(trace_a, c, e_const);
    const double const_b = comfort_index(trace_b, c, e_const);

    CHECK(var_a > var_b);       // time-varying: protect the strict step
    CHECK(const_a < const_b);   // constant: only total deviation counts
}
