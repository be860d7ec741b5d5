#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "uavplan/errors.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/scenario.hpp"
#include "uavplan/solver.hpp"

using namespace uavplan;
using Catch::Approx;

namespace {

Scenario make_scenario(std::vector<std::uint8_t> flags, std::vector<std::int64_t> counts, double p) {
    Scenario s;
    s.shortfall_flags = std::move(flags);
    s.shortfall_counts = std::move(counts);
    s.probability = p;
    return s;
}

ScenarioSet no_failure_set(std::int64_t uavs) {
    ScenarioSet set;
    set.uav_count = uavs;
    set.scenarios.push_back(make_scenario(std::vector<std::uint8_t>(uavs, 0),
                                          std::vector<std::int64_t>(uavs, 0), 1.0));
    return set;
}

PlanningProblem simple_problem(std::int64_t uavs, std::int64_t bss, std::int64_t k) {
    PlanningProblem p;
    p.recovery_threshold = k;
    p.local_cost.assign(uavs, 10.0);
    p.decode_cost.assign(uavs, 1.0);
    p.correction_cost.assign(uavs, 25.0);
    p.offload_cost.assign(uavs, std::vector<double>(bss, 3.0));
    p.worker_caps.assign(bss, 100);
    return p;
}

PlanningProblem random_problem(Rng& rng, std::int64_t uavs, std::int64_t bss, std::int64_t k) {
    PlanningProblem p;
    p.recovery_threshold = k;
    for (std::int64_t y = 0; y < uavs; ++y) {
        p.local_cost.push_back(rng.real_in(0.5, 30.0));
        p.decode_cost.push_back(rng.real_in(0.0, 5.0));
        p.correction_cost.push_back(p.local_cost.back() + rng.real_in(0.0, 40.0));
        std::vector<double> row;
        for (std::int64_t f = 0; f < bss; ++f) row.push_back(rng.real_in(0.1, 35.0));
        p.offload_cost.push_back(std::move(row));
    }
    for (std::int64_t f = 0; f < bss; ++f) p.worker_caps.push_back(rng.int_in(0, 5));
    return p;
}

// keeps k + A small enough for the default oracle cap
ScenarioSet random_set(Rng& rng, std::int64_t uavs, std::int64_t k) {
    const double q = rng.real_in(0.0, 0.9);
    const std::int64_t a_hi = std::max<std::int64_t>(1, std::min<std::int64_t>(4 - k, k));
    const std::int64_t a = rng.int_in(1, a_hi);
    return generate_independent(uavs, q, ShortfallDistribution::point_mass(a));
}

} // namespace

TEST_CASE("closed-form recourse matches the constraint") {
    // k = 4, two local + two offloaded, one copy short: exactly one recomputation
    Scenario s = make_scenario({1}, {1}, 1.0);
    CHECK(recourse_copies({4}, s, 4) == std::vector<std::int64_t>{1});
    // no shortfall flag: nothing to correct, whatever the count says
    Scenario clear = make_scenario({0}, {0}, 1.0);
    CHECK(recourse_copies({4}, clear, 4) == std::vector<std::int64_t>{0});
    // over-provisioning absorbs the failure
    CHECK(recourse_copies({6}, s, 4) == std::vector<std::int64_t>{0});
    CHECK_THROWS_AS(recourse_copies({1, 2}, s, 4), Error);
}

TEST_CASE("closed-form recourse equals enumeration over feasible corrections") {
    Rng rng(505);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::int64_t k = rng.int_in(1, 6);
        const std::int64_t a = rng.int_in(1, k);
        const std::int64_t total = rng.int_in(k, k + 4);
        const bool flagged = rng.uniform01() < 0.7;
        const std::int64_t got =
            recourse_copies_one(total, 0, flagged, flagged ? a : 0, k, false);
        // cheapest feasible correction by brute force
        std::int64_t best = -1;
        for (std::int64_t m = 0; m <= k + a + 2; ++m) {
            const bool ok = !flagged || total + m - a >= k;
            if (ok) {
                best = m;
                break;
            }
        }
        CHECK(got == best);
    }
}

TEST_CASE("evaluate_total_cost composes stage costs") {
    PlanningProblem p = simple_problem(1, 1, 4);
    const ScenarioSet none = no_failure_set(1);
    const Allocation alloc = make_allocation({2}, {{2}}, none, 4);
    const SolveReport rep = evaluate_total_cost(alloc, p, none);
    CHECK(rep.expected_recourse_cost == 0.0);
    CHECK(rep.total_cost == rep.stage1_cost);
    CHECK(rep.stage1_cost == Approx(2 * 10.0 + 2 * 3.0 + 1.0).epsilon(1e-12));
    CHECK(rep.total_fp == rep.stage1_fp + rep.recourse_fp);
}

TEST_CASE("evaluate_total_cost charges certain corrections") {
    PlanningProblem p = simple_problem(1, 1, 4);
    ScenarioSet certain;
    certain.uav_count = 1;
    certain.scenarios.push_back(make_scenario({1}, {1}, 1.0));
    const Allocation alloc = make_allocation({2}, {{2}}, certain, 4);
    CHECK(alloc.recourse[0][0] == 1);
    const SolveReport rep = evaluate_total_cost(alloc, p, certain);
    CHECK(rep.expected_recourse_cost == Approx(25.0).epsilon(1e-12));
    CHECK(rep.total_cost == Approx(rep.stage1_cost + 25.0).epsilon(1e-12));
}

TEST_CASE("evaluate_total_cost matches a hand expansion over four scenarios") {
    PlanningProblem p;
    p.recovery_threshold = 2;
    p.local_cost = {4.0, 6.0};
    p.decode_cost = {0.5, 0.25};
    p.correction_cost = {9.0, 11.0};
    p.offload_cost = {{1.5}, {2.5}};
    p.worker_caps = {10};
    const ScenarioSet set = generate_independent(2, 0.3, ShortfallDistribution::point_mass(1));
    const std::vector<std::int64_t> local{1, 2};
    const std::vector<std::vector<std::int64_t>> offload{{1}, {0}};
    const Allocation alloc = make_allocation(local, offload, set, 2);
    const SolveReport rep = evaluate_total_cost(alloc, p, set);

    // independent term-by-term expansion
    double stage1 = 0.0;
    stage1 += 1 * 4.0 + 0.5 + 1 * 1.5;
    stage1 += 2 * 6.0 + 0.25;
    double recourse = 0.0;
    for (const Scenario& s : set.scenarios) {
        for (std::size_t y = 0; y < 2; ++y) {
            if (!s.shortfall_flags[y]) continue;
            const std::int64_t total = local[y] + (y == 0 ? 1 : 0);
            const std::int64_t need = std::max<std::int64_t>(0, 2 + s.shortfall_counts[y] - total);
            recourse += s.probability * static_cast<double>(need) * p.correction_cost[y];
        }
    }
    CHECK(rep.stage1_cost == Approx(stage1).epsilon(1e-12));
    CHECK(rep.expected_recourse_cost == Approx(recourse).epsilon(1e-12));
    CHECK(rep.total_cost == Approx(stage1 + recourse).epsilon(1e-12));
}

TEST_CASE("evaluate_total_cost names the violated constraint") {
    PlanningProblem p = simple_problem(2, 1, 4);
    p.worker_caps = {3};
    const ScenarioSet none = no_failure_set(2);
    // threshold violation
    try {
        evaluate_total_cost(make_allocation({1, 4}, {{2}, {0}}, none, 4), p, none);
        FAIL("expected constraint-violation");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::constraint_violation);
        CHECK(std::string(e.what()).find("recovery-threshold") != std::string::npos);
        CHECK(std::string(e.what()).find("UAV 0") != std::string::npos);
    }
    // capacity violation
    try {
        evaluate_total_cost(make_allocation({2, 2}, {{2}, {2}}, none, 4), p, none);
        FAIL("expected constraint-violation");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::constraint_violation);
        CHECK(std::string(e.what()).find("capacity") != std::string::npos);
    }
    // recourse shortfall violation
    ScenarioSet certain;
    certain.uav_count = 1;
    certain.scenarios.push_back(make_scenario({1}, {2}, 1.0));
    PlanningProblem p1 = simple_problem(1, 1, 4);
    Allocation starved = make_allocation({4}, {{0}}, certain, 4);
    starved.recourse[0][0] = 1; // needs 2
    try {
        evaluate_total_cost(starved, p1, certain);
        FAIL("expected constraint-violation");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::constraint_violation);
        CHECK(std::string(e.what()).find("recourse") != std::string::npos);
    }
}

TEST_CASE("deterministic program prefers the cheaper source") {
    // local cheaper than any BS: everything stays on the UAV
    PlanningProblem p = simple_problem(2, 1, 4);
    p.local_cost = {2.0, 2.0};
    const SolveReport local = solve_dip(p, {0, 0});
    CHECK(local.allocation.local == std::vector<std::int64_t>{4, 4});
    CHECK(local.allocation.offload_total(0) == 0);
    CHECK(local.allocation.offload_total(1) == 0);

    // offload cheaper and capacity ample: everything goes out
    PlanningProblem q = simple_problem(1, 1, 4);
    const SolveReport off = solve_dip(q, {0});
    CHECK(off.allocation.local == std::vector<std::int64_t>{0});
    CHECK(off.allocation.offload[0][0] == 4);
    CHECK(off.total_cost == Approx(4 * 3.0 + 1.0).epsilon(1e-12));
}

TEST_CASE("deterministic program handles fixed shortfalls") {
    PlanningProblem p = simple_problem(1, 1, 4);
    p.worker_caps = {2};
    const SolveReport rep = solve_dip(p, {3}); // demand k + 3 = 7, only 2 slots
    CHECK(rep.allocation.first_stage_total(0) == 7);
    CHECK(rep.allocation.offload[0][0] == 2);
    CHECK(rep.allocation.local[0] == 5);
    CHECK_THROWS_AS(solve_dip(p, {-1}), Error);
    CHECK_THROWS_AS(solve_dip(p, {1, 2}), Error);
}

TEST_CASE("deterministic program equals exhaustive enumeration") {
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::int64_t uavs = rng.int_in(1, 3);
        const std::int64_t bss = rng.int_in(1, 2);
        const std::int64_t k = rng.int_in(1, 3);
        PlanningProblem p = random_problem(rng, uavs, bss, k);
        std::vector<std::int64_t> shortfall;
        for (std::int64_t y = 0; y < uavs; ++y) shortfall.push_back(rng.int_in(0, 2));

        const SolveReport got = solve_dip(p, shortfall);

        // independent exhaustive search over per-UAV demands
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::int64_t> caps_left(p.worker_caps);
        std::vector<std::vector<std::int64_t>> offload(uavs, std::vector<std::int64_t>(bss, 0));
        std::vector<std::int64_t> demand(uavs);
        for (std::int64_t y = 0; y < uavs; ++y) demand[y] = k + shortfall[y];
        // odometer over all offload matrices bounded by demand and caps
        std::vector<std::int64_t> flat(static_cast<std::size_t>(uavs * bss), 0);
        while (true) {
            bool ok = true;
            for (std::int64_t f = 0; f < bss && ok; ++f) {
                std::int64_t used = 0;
                for (std::int64_t y = 0; y < uavs; ++y) used += flat[y * bss + f];
                if (used > p.worker_caps[f]) ok = false;
            }
            if (ok) {
                double cost = 0.0;
                for (std::int64_t y = 0; y < uavs; ++y) {
                    std::int64_t o = 0;
                    for (std::int64_t f = 0; f < bss; ++f) {
                        o += flat[y * bss + f];
                        cost += static_cast<double>(flat[y * bss + f]) * p.offload_cost[y][f];
                    }
                    cost += p.decode_cost[y] +
                            static_cast<double>(std::max<std::int64_t>(0, demand[y] - o)) *
                                p.local_cost[y];
                }
                best = std::min(best, cost);
            }
            std::size_t i = 0;
            for (; i < flat.size(); ++i) {
                const std::int64_t y = static_cast<std::int64_t>(i) / bss;
                if (flat[i] < demand[y]) {
                    ++flat[i];
                    break;
                }
                flat[i] = 0;
            }
            if (i == flat.size()) break;
        }
        CHECK(got.total_cost == Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("stochastic solve degenerates to the deterministic one without failures") {
    Rng rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        PlanningProblem p = random_problem(rng, rng.int_in(1, 3), rng.int_in(1, 2), rng.int_in(1, 3));
        const ScenarioSet none = no_failure_set(p.uav_count());
        const SolveReport sip = solve_sip(p, none);
        const SolveReport dip = solve_dip(p, std::vector<std::int64_t>(p.uav_count(), 0));
        CHECK(sip.total_fp == dip.total_fp);
        CHECK(sip.allocation.local == dip.allocation.local);
        CHECK(sip.allocation.offload == dip.allocation.offload);
        CHECK(sip.expected_recourse_cost == 0.0);
    }
}

TEST_CASE("stochastic solve buys the interior optimum of the offload tradeoff") {
    // single UAV, single BS, local priced out: the best offload count balances
    // the per-copy price against the expected correction
    PlanningProblem p;
    p.recovery_threshold = 4;
    p.local_cost = {1e7};
    p.decode_cost = {1.0};
    p.correction_cost = {1e7};
    p.offload_cost = {{3.0}};
    p.worker_caps = {100};
    ScenarioSet set;
    set.uav_count = 1;
    set.scenarios.push_back(make_scenario({0}, {0}, 0.5));
    set.scenarios.push_back(make_scenario({1}, {1}, 0.3));
    set.scenarios.push_back(make_scenario({1}, {2}, 0.2));
    const SolveReport rep = solve_sip(p, set);

    // sweep the offload count by hand
    double best = std::numeric_limits<double>::infinity();
    std::int64_t best_o = 0;
    for (std::int64_t o = 4; o <= 10; ++o) {
        double cost = static_cast<double>(o) * 3.0 + 1.0;
        for (const Scenario& s : set.scenarios) {
            if (!s.shortfall_flags[0]) continue;
            cost += s.probability *
                    static_cast<double>(std::max<std::int64_t>(0, 4 + s.shortfall_counts[0] - o)) *
                    1e7;
        }
        if (cost < best) {
            best = cost;
            best_o = o;
        }
    }
    CHECK(best_o == 6); // interior: failures are catastrophically expensive
    CHECK(rep.allocation.offload[0][0] == best_o);
    CHECK(rep.allocation.local[0] == 0);
    CHECK(rep.total_cost == Approx(best).epsilon(1e-9));
}

TEST_CASE("stochastic solve equals the enumeration oracle on random instances") {
    Rng rng(777);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::int64_t uavs = rng.int_in(1, 3);
        const std::int64_t bss = rng.int_in(1, 2);
        const std::int64_t k = rng.int_in(1, 3);
        PlanningProblem p = random_problem(rng, uavs, bss, k);
        const ScenarioSet set = random_set(rng, uavs, k);
        const SolveReport sip = solve_sip(p, set);
        const SolveReport oracle = brute_force_oracle(p, set);
        CHECK(sip.total_fp == oracle.total_fp);
        CHECK(sip.allocation.local == oracle.allocation.local);
        CHECK(sip.allocation.offload == oracle.allocation.offload);
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("oracle agrees with the deterministic solver on a trivial instance") {
    PlanningProblem p = simple_problem(1, 1, 3);
    const ScenarioSet none = no_failure_set(1);
    const SolveReport oracle = brute_force_oracle(p, none);
    const SolveReport dip = solve_dip(p, {0});
    CHECK(oracle.total_fp == dip.total_fp);
    CHECK(oracle.allocation.local == dip.allocation.local);
    CHECK(oracle.allocation.offload == dip.allocation.offload);
}

TEST_CASE("oracle refuses oversized search spaces") {
    PlanningProblem p = simple_problem(6, 3, 6);
    ScenarioSet set = no_failure_set(6);
    SolverOptions opts;
    opts.oracle_cap = 1000;
    try {
        brute_force_oracle(p, set, opts);
        FAIL("expected oracle-too-large");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::oracle_too_large);
    }
}

TEST_CASE("expected-value baseline never beats the stochastic optimum") {
    Rng rng(31415);
    bool strict_seen = false;
    for (int trial = 0; trial < 60; ++trial) {
        const std::int64_t uavs = rng.int_in(1, 3);
        const std::int64_t bss = rng.int_in(1, 2);
        const std::int64_t k = rng.int_in(1, 3);
        PlanningProblem p = random_problem(rng, uavs, bss, k);
        const ScenarioSet set = random_set(rng, uavs, k);
        const SolveReport sip = solve_sip(p, set);
        const SolveReport evf = solve_evf(p, set);
        CHECK(sip.total_fp <= evf.total_fp);
        if (sip.total_fp < evf.total_fp) strict_seen = true;
    }
    CHECK(strict_seen);
}

TEST_CASE("expected-value baseline degenerate cases") {
    Rng rng(2718);
    PlanningProblem p = random_problem(rng, 2, 2, 3);
    const ScenarioSet none = no_failure_set(2);
    const SolveReport evf = solve_evf(p, none);
    const SolveReport dip = solve_dip(p, {0, 0});
    CHECK(evf.total_fp == dip.total_fp);
    CHECK(evf.allocation.local == dip.allocation.local);

    // a point mass is perfect information: same objective as the stochastic solve
    ScenarioSet point;
    point.uav_count = 2;
    point.scenarios.push_back(make_scenario({1, 0}, {2, 0}, 1.0));
    const SolveReport evf_point = solve_evf(p, point);
    const SolveReport sip_point = solve_sip(p, point);
    CHECK(evf_point.total_fp == sip_point.total_fp);
}

TEST_CASE("optimal recourse sits on the constraint boundary") {
    Rng rng(1001);
    for (int trial = 0; trial < 30; ++trial) {
        const std::int64_t uavs = rng.int_in(1, 3);
        const std::int64_t k = rng.int_in(1, 3);
        PlanningProblem p = random_problem(rng, uavs, rng.int_in(1, 2), k);
        const ScenarioSet set = random_set(rng, uavs, k);
        const SolveReport rep = solve_sip(p, set);
        for (std::size_t y = 0; y < rep.allocation.local.size(); ++y) {
            const std::int64_t total = rep.allocation.first_stage_total(y);
            for (std::size_t w = 0; w < set.scenarios.size(); ++w) {
                const Scenario& s = set.scenarios[w];
                const std::int64_t m = rep.allocation.recourse[y][w];
                if (!s.shortfall_flags[y]) {
                    CHECK(m == 0);
                } else {
                    CHECK((m == 0 || total + m - s.shortfall_counts[y] == k));
                }
            }
        }
    }
}

TEST_CASE("objective is monotone in the cost rates") {
    Rng rng(555);
    PlanningProblem p = random_problem(rng, 2, 2, 2);
    const ScenarioSet set = generate_independent(2, 0.3, ShortfallDistribution::point_mass(1));
    const SolveReport base = solve_sip(p, set);
    PlanningProblem dearer = p;
    dearer.offload_cost[0][0] += 5.0;
    CHECK(solve_sip(dearer, set).total_fp >= base.total_fp);
    dearer = p;
    dearer.local_cost[1] += 5.0;
    CHECK(solve_sip(dearer, set).total_fp >= base.total_fp);
    dearer = p;
    dearer.correction_cost[0] += 5.0;
    CHECK(solve_sip(dearer, set).total_fp >= base.total_fp);
    dearer = p;
    dearer.decode_cost[0] += 5.0;
    CHECK(solve_sip(dearer, set).total_fp >= base.total_fp);
}

TEST_CASE("shifting probability into failure worlds never cheapens the plan") {
    Rng rng(556);
    PlanningProblem p = random_problem(rng, 2, 1, 2);
    for (double q : {0.0, 0.1, 0.3, 0.5, 0.8}) {
        const ScenarioSet lo = generate_independent(2, q, ShortfallDistribution::point_mass(1));
        const ScenarioSet hi = generate_independent(2, q + 0.15, ShortfallDistribution::point_mass(1));
        CHECK(solve_sip(p, lo).total_fp <= solve_sip(p, hi).total_fp);
    }
}

TEST_CASE("ties break toward less offloading, then lower indices") {
    // all-zero rates: every feasible allocation costs nothing, so the reported
    // one is pinned by the tie-break alone
    PlanningProblem p;
    p.recovery_threshold = 2;
    p.local_cost = {0.0};
    p.decode_cost = {0.0};
    p.correction_cost = {0.0};
    p.offload_cost = {{0.0, 0.0}};
    p.worker_caps = {3, 3};
    const ScenarioSet none = no_failure_set(1);
    const SolveReport rep = solve_sip(p, none);
    CHECK(rep.total_fp == 0);
    CHECK(rep.allocation.offload_total(0) == 0);
    CHECK(rep.allocation.local[0] == 2);
    const SolveReport oracle = brute_force_oracle(p, none);
    CHECK(oracle.allocation.local == rep.allocation.local);
    CHECK(oracle.allocation.offload == rep.allocation.offload);
}

TEST_CASE("clamped shortfalls never exceed the offloaded copies") {
    SolverOptions opts;
    opts.clamp_shortfall_to_offload = true;
    PlanningProblem p = simple_problem(1, 1, 4);
    p.local_cost = {2.0}; // local is cheapest: nothing offloaded
    ScenarioSet certain;
    certain.uav_count = 1;
    certain.scenarios.push_back(make_scenario({1}, {3}, 1.0));
    const SolveReport rep = solve_sip(p, certain, opts);
    CHECK(rep.allocation.offload_total(0) == 0);
    CHECK(rep.allocation.local[0] == 4);
    // with no offload the clamp kills the exposure entirely
    CHECK(rep.expected_recourse_cost == 0.0);
    CHECK(rep.allocation.recourse[0][0] == 0);

    // and the local count never needs to exceed k under the clamp
    Rng rng(808);
    for (int trial = 0; trial < 25; ++trial) {
        PlanningProblem rp = random_problem(rng, rng.int_in(1, 2), 1, rng.int_in(1, 3));
        const ScenarioSet set = random_set(rng, rp.uav_count(), rp.recovery_threshold);
        const SolveReport r = solve_sip(rp, set, opts);
        const SolveReport o = brute_force_oracle(rp, set, opts);
        CHECK(r.total_fp == o.total_fp);
        for (std::int64_t l : r.allocation.local) CHECK(l <= rp.recovery_threshold);
    }
}

TEST_CASE("objective is invariant under UAV relabeling") {
    Rng rng(6174);
    for (int trial = 0; trial < 15; ++trial) {
        const std::int64_t uavs = rng.int_in(2, 4);
        const std::int64_t k = rng.int_in(1, 3);
        PlanningProblem p = random_problem(rng, uavs, 2, k);
        const ScenarioSet set = random_set(rng, uavs, k);
        const SolveReport base = solve_sip(p, set);

        // reverse the UAV order everywhere
        PlanningProblem q = p;
        std::reverse(q.local_cost.begin(), q.local_cost.end());
        std::reverse(q.decode_cost.begin(), q.decode_cost.end());
        std::reverse(q.correction_cost.begin(), q.correction_cost.end());
        std::reverse(q.offload_cost.begin(), q.offload_cost.end());
        ScenarioSet rset = set;
        for (Scenario& s : rset.scenarios) {
            std::reverse(s.shortfall_flags.begin(), s.shortfall_flags.end());
            std::reverse(s.shortfall_counts.begin(), s.shortfall_counts.end());
        }
        const SolveReport flipped = solve_sip(q, rset);
        CHECK(flipped.total_fp == base.total_fp);
    }
}

TEST_CASE("a network without base stations computes everything locally") {
    PlanningProblem p;
    p.recovery_threshold = 3;
    p.local_cost = {5.0, 6.0};
    p.decode_cost = {1.0, 1.0};
    p.correction_cost = {12.0, 13.0};
    p.offload_cost = {{}, {}};
    p.worker_caps = {};
    const ScenarioSet set = generate_independent(2, 0.5, ShortfallDistribution::point_mass(1));
    const SolveReport rep = solve_sip(p, set);
    // a local buffer copy costs less than the expected correction
    CHECK(rep.allocation.local == std::vector<std::int64_t>{4, 4});
    CHECK(rep.expected_recourse_cost == 0.0);
    CHECK(rep.total_fp == brute_force_oracle(p, set).total_fp);
}

TEST_CASE("solver rejects bad inputs") {
    PlanningProblem p = simple_problem(1, 1, 4);
    p.local_cost = {-1.0};
    CHECK_THROWS_AS(solve_dip(p, {0}), Error);
    PlanningProblem q = simple_problem(2, 1, 4);
    ScenarioSet mismatched = no_failure_set(3);
    try {
        solve_sip(q, mismatched);
        FAIL("expected dimension error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::dimension_mismatch);
    }
}

TEST_CASE("report totals are internally consistent") {
    Rng rng(9090);
    for (int trial = 0; trial < 20; ++trial) {
        PlanningProblem p = random_problem(rng, rng.int_in(1, 3), rng.int_in(1, 2), rng.int_in(1, 3));
        const ScenarioSet set = random_set(rng, p.uav_count(), p.recovery_threshold);
        for (const SolveReport& rep : {solve_sip(p, set), solve_evf(p, set)}) {
            CHECK(rep.total_fp == rep.stage1_fp + rep.recourse_fp);
            CHECK(rep.total_cost ==
                  Approx(rep.stage1_cost + rep.expected_recourse_cost).epsilon(1e-9));
            Fp stage_sum = 0, rec_sum = 0;
            for (const UavBreakdown& u : rep.per_uav) {
                stage_sum += u.stage1_fp;
                rec_sum += u.recourse_fp;
            }
            CHECK(stage_sum == rep.stage1_fp);
            CHECK(rec_sum == rep.recourse_fp);
            // scoring the reported allocation reproduces the reported cost
            const SolveReport again = evaluate_total_cost(rep.allocation, p, set);
            CHECK(again.total_fp == rep.total_fp);
        }
    }
}
