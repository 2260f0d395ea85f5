#include <doctest.h>

#include <limits>
#include <stdexcept>

#include <random>

#include "heatcoord/demand_shift.hpp"
#include "support/oracles.hpp"

using namespace heatcoord;

namespace {

std::size_t at(int t1, int t2, int n) { return static_cast<std::size_t>(t1) * n + t2; }

ShiftFeasibility full_feasibility(const oracle::Instance& inst, bool demand_order = true) {
    const auto sa = sigma_status(inst.schedule);
    const auto sb = sigma_temperature(inst.trace, inst.comfort, inst.mats);
    auto sc = sigma_cost_saving(inst.demand_mw, inst.params.rated_power_kw);
    if (!demand_order) sc.assign(sc.size(), 1);
    const auto pi = price_difference_matrix(inst.price);
    return compose_and_price(sa, sb, sc, pi, inst.params.rated_power_kw, inst.params.dt_hours);
}

}  // namespace

TEST_CASE("sigma_status") {
    SUBCASE("no OFF target when everything is ON") {
        for (auto v : sigma_status(Schedule{1, 1, 1})) CHECK(v == 0);
    }
    SUBCASE("no ON source when everything is OFF") {
        for (auto v : sigma_status(Schedule{0, 0, 0})) CHECK(v == 0);
    }
    SUBCASE("1,0,1 enumerated") {
        const auto m = sigma_status(Schedule{1, 0, 1});
        for (int t1 = 0; t1 < 3; ++t1)
            for (int t2 = 0; t2 < 3; ++t2) {
                const bool expect = (t1 == 0 && t2 == 1) || (t1 == 2 && t2 == 1);
                CHECK(m[at(t1, t2, 3)] == (expect ? 1 : 0));
            }
    }
}

TEST_CASE("sigma_temperature") {
    SUBCASE("wide-open comfort never blocks") {
        std::mt19937_64 rng(31);
        auto inst = oracle::random_instance(rng, 6);
        const double inf = std::numeric_limits<double>::infinity();
        for (int t = 0; t < 6; ++t) {
            inst.comfort.lower[t] = -inf;
            inst.comfort.upper[t] = inf;
        }
        const auto m = sigma_temperature(inst.trace, inst.comfort, inst.mats);
        for (int t1 = 0; t1 < 6; ++t1)
            for (int t2 = 0; t2 < 6; ++t2) CHECK(m[at(t1, t2, 6)] == (t1 == t2 ? 0 : 1));
    }
    SUBCASE("zero upper margin blocks a later-to-earlier shift") {
        // Shifting earlier warms [t2, t1); any step already at its upper
        // bound there kills the pair.
        std::mt19937_64 rng(32);
        auto inst = oracle::random_instance(rng, 6);
        int t1 = -1, t2 = -1;
        for (int a = 0; a < 6 && t1 < 0; ++a)
            if (inst.schedule[a] == 1)
                for (int b = 0; b < a && t1 < 0; ++b)
                    if (inst.schedule[b] == 0) { t1 = a; t2 = b; }
        REQUIRE(t1 > t2);
        inst.comfort.upper[t2] = inst.trace[t2];   // touching the bound
        const auto m = sigma_temperature(inst.trace, inst.comfort, inst.mats);
        CHECK(m[at(t1, t2, 6)] == 0);
    }
    SUBCASE("matches the propagate-and-check oracle on status-valid pairs") {
        std::mt19937_64 rng(33);
        for (int rep = 0; rep < 200; ++rep) {
            const int n = std::uniform_int_distribution<int>(4, 8)(rng);
            auto inst = oracle::random_instance(rng, n);
            const auto fast = sigma_temperature(inst.trace, inst.comfort, inst.mats);
            const auto brute = oracle::sigma_brute(inst.schedule, inst.initial_temp, inst.params,
                                                   inst.comfort, inst.demand_mw,
                                                   /*demand_order=*/false);
            for (int t1 = 0; t1 < n; ++t1)
                for (int t2 = 0; t2 < n; ++t2) {
                    if (!(inst.schedule[t1] == 1 && inst.schedule[t2] == 0)) continue;
                    CHECK(fast[at(t1, t2, n)] == brute[at(t1, t2, n)]);
                }
        }
    }
}

TEST_CASE("sigma_cost_saving") {
    SUBCASE("equal demand cannot host a shift") {
        const auto m = sigma_cost_saving({5.0, 5.0}, 3.0);
        for (auto v : m) CHECK(v == 0);
    }
    SUBCASE("ratio above one passes") {
        const auto m = sigma_cost_saving({10.0, 9.99}, 3.0);
        CHECK(m[at(0, 1, 2)] == 1);   // 0.01 / 0.006 >= 1 after flooring
        CHECK(m[at(1, 0, 2)] == 0);
    }
    SUBCASE("shifting into higher demand never passes") {
        const auto m = sigma_cost_saving({1.0, 8.0}, 3.0);
        CHECK(m[at(0, 1, 2)] == 0);
    }
    SUBCASE("exact threshold counts as feasible") {
        const auto m = sigma_cost_saving({10.006, 10.0}, 3.0);
        CHECK(m[at(0, 1, 2)] == 1);
    }
}

TEST_CASE("compose_and_price") {
    SUBCASE("an all-zero factor annihilates everything") {
        std::vector<std::uint8_t> ones(4, 1), zeros(4, 0);
        const auto f = compose_and_price(ones, zeros, ones, {0.0, -30.0, 30.0, 0.0}, 3.0, 0.25);
        for (auto v : f.sigma) CHECK(v == 0);
        for (double s : f.savings) CHECK(s == 0.0);
    }
    SUBCASE("2x2 saving arithmetic") {
        std::vector<std::uint8_t> sigma_only = {0, 1, 0, 0};
        std::vector<std::uint8_t> ones(4, 1);
        const auto f =
            compose_and_price(sigma_only, ones, ones, {0.0, -30.0, 30.0, 0.0}, 3.0, 0.25);
        CHECK(f.savings[at(0, 1, 2)] == doctest::Approx(-0.0225));
        CHECK(f.savings[at(1, 0, 2)] == 0.0);
    }
    SUBCASE("savings support is inside sigma support") {
        std::mt19937_64 rng(34);
        auto inst = oracle::random_instance(rng, 8);
        const auto f = full_feasibility(inst);
        for (std::size_t k = 0; k < f.sigma.size(); ++k)
            if (f.savings[k] != 0.0) CHECK(f.sigma[k] == 1);
    }
}

TEST_CASE("select_best_shift") {
    ShiftFeasibility f;
    f.n = 3;
    f.sigma.assign(9, 1);
    f.savings.assign(9, 0.0);

    SUBCASE("no positive saving means no shift") {
        f.savings[at(0, 1, 3)] = -0.5;
        CHECK_FALSE(select_best_shift(f).has_value());
    }
    SUBCASE("unique maximum wins") {
        f.savings[at(2, 1, 3)] = 0.5;
        f.savings[at(0, 1, 3)] = 0.2;
        const auto c = select_best_shift(f);
        REQUIRE(c.has_value());
        CHECK(c->t1 == 2);
        CHECK(c->t2 == 1);
        CHECK(c->saving_gbp == doctest::Approx(0.5));
    }
    SUBCASE("ties break to the smallest t1 then t2") {
        f.savings[at(1, 0, 3)] = 0.5;
        f.savings[at(2, 0, 3)] = 0.5;
        const auto c = select_best_shift(f);
        REQUIRE(c.has_value());
        CHECK(c->t1 == 1);
        CHECK(c->t2 == 0);
    }
}

TEST_CASE("apply_shift") {
    std::mt19937_64 rng(35);

    SUBCASE("two-step example matches repropagation") {
        ThermalParams p;
        p.psi = 0.5;
        p.gamma = 2.0;
        p.rated_power_kw = 3.0;
        p.dt_hours = 0.25;
        p.upsilon = {1.0, 1.0};
        const auto m = build_propagation_matrices(p);
        Schedule eps = {1, 0};
        auto trace = propagate(10.0, eps, m);
        apply_shift(eps, trace, m, 0, 1);
        CHECK(eps == Schedule{0, 1});
        const auto expect = propagate(10.0, eps, m);
        CHECK(trace[0] == doctest::Approx(expect[0]).epsilon(1e-12));
        CHECK(trace[1] == doctest::Approx(expect[1]).epsilon(1e-12));
    }

    SUBCASE("shift then reverse restores the original") {
        auto inst = oracle::random_instance(rng, 12);
        int t1 = -1, t2 = -1;
        for (int a = 0; a < 12 && t1 < 0; ++a)
            if (inst.schedule[a])
                for (int b = 0; b < 12 && t1 < 0; ++b)
                    if (!inst.schedule[b]) { t1 = a; t2 = b; }
        REQUIRE(t1 >= 0);
        const auto eps0 = inst.schedule;
        const auto trace0 = inst.trace;
        apply_shift(inst.schedule, inst.trace, inst.mats, t1, t2);
        apply_shift(inst.schedule, inst.trace, inst.mats, t2, t1);
        CHECK(inst.schedule == eps0);
        for (int t = 0; t < 12; ++t)
            CHECK(inst.trace[t] == doctest::Approx(trace0[t]).epsilon(1e-9));
    }

    SUBCASE("ON count is preserved") {
        for (int rep = 0; rep < 20; ++rep) {
            auto inst = oracle::random_instance(rng, 10);
            int on_before = 0;
            for (auto e : inst.schedule) on_before += e;
            int t1 = -1, t2 = -1;
            for (int a = 0; a < 10 && t1 < 0; ++a)
                if (inst.schedule[a])
                    for (int b = 0; b < 10 && t1 < 0; ++b)
                        if (!inst.schedule[b]) { t1 = a; t2 = b; }
            if (t1 < 0) continue;
            apply_shift(inst.schedule, inst.trace, inst.mats, t1, t2);
            int on_after = 0;
            for (auto e : inst.schedule) on_after += e;
            CHECK(on_after == on_before);
        }
    }

    SUBCASE("stale status is a contract error") {
        auto inst = oracle::random_instance(rng, 6);
        inst.schedule = {1, 1, 0, 0, 1, 0};
        CHECK_THROWS_AS(apply_shift(inst.schedule, inst.trace, inst.mats, 2, 3),
                        std::logic_error);
        CHECK_THROWS_AS(apply_shift(inst.schedule, inst.trace, inst.mats, 0, 1),
                        std::logic_error);
        CHECK_THROWS_AS(apply_shift(inst.schedule, inst.trace, inst.mats, 2, 2),
                        std::logic_error);
    }
}

TEST_CASE("composed sigma equals the full brute-force exchange check") {
    std::mt19937_64 rng(36);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = std::uniform_int_distribution<int>(4, 8)(rng);
        auto inst = oracle::random_instance(rng, n);
        const auto f = full_feasibility(inst);
        const auto brute = oracle::sigma_brute(inst.schedule, inst.initial_temp, inst.params,
                                               inst.comfort, inst.demand_mw,
                                               /*demand_order=*/true);
        for (std::size_t k = 0; k < brute.size(); ++k) CHECK(f.sigma[k] == brute[k]);
    }
}

TEST_CASE("find_best_shift equals the matrix route") {
    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 400; ++rep) {
        const int n = std::uniform_int_distribution<int>(4, 16)(rng);
        auto inst = oracle::random_instance(rng, n);
        for (bool order : {true, false}) {
            const auto via_matrix = select_best_shift(full_feasibility(inst, order));
            const auto fused = find_best_shift(inst.schedule, inst.trace, inst.comfort,
                                               inst.mats, inst.demand_mw, inst.price,
                                               inst.params.rated_power_kw,
                                               inst.params.dt_hours, order);
            REQUIRE(via_matrix.has_value() == fused.has_value());
            if (via_matrix) {
                CHECK(via_matrix->t1 == fused->t1);
                CHECK(via_matrix->t2 == fused->t2);
                CHECK(via_matrix->saving_gbp ==
                      doctest::Approx(fused->saving_gbp).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("applied demand-ordered shifts preserve the price order") {
    std::mt19937_64 rng(38);
    int applied = 0;
    for (int rep = 0; rep < 200; ++rep) {
        auto inst = oracle::random_instance(rng, 10);
        const auto pick = find_best_shift(inst.schedule, inst.trace, inst.comfort, inst.mats,
                                          inst.demand_mw, inst.price,
                                          inst.params.rated_power_kw, inst.params.dt_hours,
                                          /*enforce_demand_order=*/true);
        if (!pick) continue;
        ++applied;
        const double p_mw = inst.params.rated_power_kw * kKwToMw;
        const double d1_post = inst.demand_mw[pick->t1] - p_mw;
        const double d2_post = inst.demand_mw[pick->t2] + p_mw;
        const double a = 0.03, b = 12.0;
        CHECK(a * d1_post + b >= a * d2_post + b);   // p+(t1) >= p+(t2)
    }
    CHECK(applied > 50);   // the property must actually exercise shifts
}

TEST_CASE("a selected shift lowers the household bill by its saving") {
    std::mt19937_64 rng(39);
    for (int rep = 0; rep < 100; ++rep) {
        auto inst = oracle::random_instance(rng, 12);
        const auto pick = find_best_shift(inst.schedule, inst.trace, inst.comfort, inst.mats,
                                          inst.demand_mw, inst.price,
                                          inst.params.rated_power_kw, inst.params.dt_hours,
                                          true);
        if (!pick) continue;
        CHECK(pick->saving_gbp > 0.0);
        auto bill = [&](const Schedule& eps) {
            double sum = 0.0;
            for (int t = 0; t < 12; ++t)
                if (eps[t])
                    sum += inst.params.rated_power_kw * kKwToMw * inst.price[t] *
                           inst.params.dt_hours;
            return sum;
        };
        const double before = bill(inst.schedule);
        apply_shift(inst.schedule, inst.trace, inst.mats, pick->t1, pick->t2);
        const double after = bill(inst.schedule);
        CHECK(before - after == doctest::Approx(pick->saving_gbp).epsilon(1e-9));
    }
}
