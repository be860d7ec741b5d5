#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "uavplan/errors.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

/// Fixed-point currency amount. All optimality comparisons inside the solvers
/// happen on these integers so results do not hinge on float rounding.
using Fp = std::int64_t;

/// Solver-facing view of one network: per-copy rates, worker capacities, and
/// the recovery threshold. Rates are in currency, capacities in copies.
struct PlanningProblem {
    std::vector<double> local_cost;                // per UAV, per copy
    std::vector<double> decode_cost;               // per UAV, once per task
    std::vector<double> correction_cost;           // per UAV, per recourse copy
    std::vector<std::vector<double>> offload_cost; // [uav][bs], per copy
    std::vector<std::int64_t> worker_caps;         // n_f per BS
    std::int64_t recovery_threshold = 1;           // k

    std::size_t uav_count() const { return local_cost.size(); }
    std::size_t bs_count() const { return worker_caps.size(); }
};

enum class EvfRounding { half_up, ceiling };

struct SolverOptions {
    bool clamp_shortfall_to_offload = false;
    std::int64_t fixed_point_scale = 1'000'000'000; // currency resolution 1e-9
    std::uint64_t oracle_cap = 10'000'000;          // raw enumeration size limit
    EvfRounding evf_rounding = EvfRounding::half_up;
};

struct Allocation {
    std::vector<std::int64_t> local;                 // M^(l), per UAV
    std::vector<std::vector<std::int64_t>> offload;  // M^(o), [uav][bs]
    std::vector<std::vector<std::int64_t>> recourse; // M^(L), [uav][scenario]

    std::int64_t offload_total(std::size_t y) const {
        std::int64_t t = 0;
        for (std::int64_t v : offload[y]) t += v;
        return t;
    }
    std::int64_t first_stage_total(std::size_t y) const { return local[y] + offload_total(y); }
};

enum class Method { dip, sip, evf, oracle, eval };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::dip: return "dip";
        case Method::sip: return "sip";
        case Method::evf: return "evf";
        case Method::oracle: return "oracle";
        case Method::eval: return "eval";
    }
    return "?";
}

struct UavBreakdown {
    std::int64_t local_copies = 0;
    std::int64_t offload_copies = 0;
    Fp stage1_fp = 0;
    Fp recourse_fp = 0;
};

struct SolveReport {
    Allocation allocation;
    Fp stage1_fp = 0;
    Fp recourse_fp = 0;
    Fp total_fp = 0;
    double stage1_cost = 0.0;
    double expected_recourse_cost = 0.0;
    double total_cost = 0.0;
    std::vector<UavBreakdown> per_uav;
    std::uint64_t nodes_explored = 0;
    Method method = Method::eval;
    std::int64_t fixed_point_scale = 1'000'000'000;
};

/// Cheapest feasible recourse for one UAV in one scenario: exactly the copies
/// needed to lift the first stage back to the threshold, zero without a
/// shortfall flag. With the clamp enabled the shortfall cannot exceed what was
/// actually offloaded.
inline std::int64_t recourse_copies_one(std::int64_t first_stage_total, std::int64_t offload_total,
                                        bool flagged, std::int64_t shortfall, std::int64_t k,
                                        bool clamp_to_offload) {
    if (!flagged) return 0;
    const std::int64_t a = clamp_to_offload ? std::min(shortfall, offload_total) : shortfall;
    return std::max<std::int64_t>(0, k + a - first_stage_total);
}

/// Per-UAV recourse counts for one scenario, unclamped form.
inline std::vector<std::int64_t> recourse_copies(const std::vector<std::int64_t>& first_stage_totals,
                                                 const Scenario& scenario, std::int64_t k) {
    if (scenario.shortfall_flags.size() != first_stage_totals.size()) {
        throw Error(Errc::dimension_mismatch, "scenario and first-stage vectors differ in length");
    }
    std::vector<std::int64_t> out(first_stage_totals.size(), 0);
    for (std::size_t y = 0; y < out.size(); ++y) {
        out[y] = recourse_copies_one(first_stage_totals[y], 0, scenario.shortfall_flags[y] != 0,
                                     scenario.shortfall_counts[y], k, false);
    }
    return out;
}

namespace detail {

inline Fp to_fp(double x, std::int64_t scale) {
    const double scaled = x * static_cast<double>(scale);
    if (!(std::abs(scaled) < 4.6e18)) {
        throw Error(Errc::validation, "cost magnitude overflows the fixed-point scale");
    }
    return static_cast<Fp>(std::llround(scaled));
}

inline void check_problem(const PlanningProblem& p) {
    const std::size_t y = p.uav_count();
    const std::size_t f = p.bs_count();
    if (y == 0) throw Error(Errc::validation, "problem has no UAVs");
    if (p.recovery_threshold < 1) throw Error(Errc::validation, "recovery threshold must be >= 1");
    if (p.decode_cost.size() != y || p.correction_cost.size() != y || p.offload_cost.size() != y) {
        throw Error(Errc::dimension_mismatch, "per-UAV rate vectors differ in length");
    }
    for (std::size_t i = 0; i < y; ++i) {
        if (p.offload_cost[i].size() != f) {
            throw Error(Errc::dimension_mismatch, "offload rate matrix does not match BS count");
        }
        if (p.local_cost[i] < 0 || p.decode_cost[i] < 0 || p.correction_cost[i] < 0) {
            throw Error(Errc::validation, "negative cost rate for UAV " + std::to_string(i));
        }
        for (double c : p.offload_cost[i]) {
            if (c < 0) throw Error(Errc::validation, "negative offload rate for UAV " + std::to_string(i));
        }
    }
    for (std::int64_t cap : p.worker_caps) {
        if (cap < 0) throw Error(Errc::validation, "negative worker capacity");
    }
}

/// Exact cost bookkeeping shared by every solve path. All searches read their
/// objective values from here, so branch-and-bound, the enumeration oracle,
/// and re-evaluation agree to the last fixed-point unit by construction.
struct CostModel {
    const PlanningProblem& prob;
    const ScenarioSet& set;
    SolverOptions opts;
    std::int64_t k = 1;
    std::int64_t a_max = 0;
    std::int64_t t_max = 1; // k + a_max; more first-stage copies can never help

    std::vector<Fp> local_fp, decode_fp;
    std::vector<std::vector<Fp>> offload_fp;

    // expected recourse cost tables; clamped mode needs the offload total too
    std::vector<std::vector<Fp>> rec_by_total;                // [y][min(T, t_max)]
    std::vector<std::vector<std::vector<Fp>>> rec_by_split;   // [y][O][min(T, t_max)]

    CostModel(const PlanningProblem& p, const ScenarioSet& s, const SolverOptions& o)
        : prob(p), set(s), opts(o) {
        check_problem(p);
        if (!set.scenarios.empty() &&
            set.uav_count != static_cast<std::int64_t>(p.uav_count())) {
            throw Error(Errc::dimension_mismatch,
                        "scenario set is for " + std::to_string(set.uav_count) +
                            " UAVs, problem has " + std::to_string(p.uav_count()));
        }
        k = p.recovery_threshold;
        a_max = set.max_shortfall();
        t_max = k + a_max;
        const std::int64_t scale = opts.fixed_point_scale;
        if (scale < 1) throw Error(Errc::validation, "fixed-point scale must be >= 1");
        const std::size_t y_n = p.uav_count();
        local_fp.resize(y_n);
        decode_fp.resize(y_n);
        offload_fp.resize(y_n);
        for (std::size_t y = 0; y < y_n; ++y) {
            local_fp[y] = to_fp(p.local_cost[y], scale);
            decode_fp[y] = to_fp(p.decode_cost[y], scale);
            offload_fp[y].resize(p.bs_count());
            for (std::size_t f = 0; f < p.bs_count(); ++f) {
                offload_fp[y][f] = to_fp(p.offload_cost[y][f], scale);
            }
        }
        build_recourse_tables();
    }

    /// Expected recourse copies for UAV y at first-stage total T (and offload
    /// total O when clamping), summed in scenario order.
    double expected_recourse_copies(std::size_t y, std::int64_t total, std::int64_t offload_total) const {
        double acc = 0.0;
        for (const Scenario& s : set.scenarios) {
            acc += s.probability *
                   static_cast<double>(recourse_copies_one(total, offload_total,
                                                           s.shortfall_flags[y] != 0,
                                                           s.shortfall_counts[y], k,
                                                           opts.clamp_shortfall_to_offload));
        }
        return acc;
    }

    Fp recourse_fp_from_copies(std::size_t y, double expected_copies) const {
        return to_fp(expected_copies * prob.correction_cost[y], opts.fixed_point_scale);
    }

    void build_recourse_tables() {
        const std::size_t y_n = prob.uav_count();
        if (set.scenarios.empty()) return; // deterministic program, no recourse
        if (!opts.clamp_shortfall_to_offload) {
            rec_by_total.resize(y_n);
            for (std::size_t y = 0; y < y_n; ++y) {
                rec_by_total[y].resize(static_cast<std::size_t>(t_max) + 1);
                for (std::int64_t t = 0; t <= t_max; ++t) {
                    rec_by_total[y][static_cast<std::size_t>(t)] =
                        recourse_fp_from_copies(y, expected_recourse_copies(y, t, 0));
                }
            }
        } else {
            rec_by_split.resize(y_n);
            for (std::size_t y = 0; y < y_n; ++y) {
                rec_by_split[y].resize(static_cast<std::size_t>(t_max) + 1);
                for (std::int64_t o = 0; o <= t_max; ++o) {
                    auto& slice = rec_by_split[y][static_cast<std::size_t>(o)];
                    slice.resize(static_cast<std::size_t>(t_max) + 1);
                    for (std::int64_t t = o; t <= t_max; ++t) {
                        slice[static_cast<std::size_t>(t)] =
                            recourse_fp_from_copies(y, expected_recourse_copies(y, t, o));
                    }
                }
            }
        }
    }

    /// Expected recourse cost of UAV y with the given local count and offload
    /// total. Zero whenever the first stage reaches t_max = k + A_max.
    Fp recourse_cost_fp(std::size_t y, std::int64_t local, std::int64_t offload_total) const {
        if (set.scenarios.empty()) return 0;
        const std::int64_t total = local + offload_total;
        if (!opts.clamp_shortfall_to_offload) {
            return rec_by_total[y][static_cast<std::size_t>(std::min(total, t_max))];
        }
        if (total >= t_max) return 0;
        return rec_by_split[y][static_cast<std::size_t>(offload_total)][static_cast<std::size_t>(total)];
    }
};

/// One candidate decision for a single UAV: the offload split plus the best
/// matching local count.
struct Row {
    std::vector<std::int64_t> offload;
    std::int64_t offload_total = 0;
    std::int64_t local = 0;
    Fp stage1 = 0;
    Fp recourse = 0;
    Fp cost = 0;
};

inline void sort_rows(std::vector<Row>& rows) {
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        if (a.offload_total != b.offload_total) return a.offload_total < b.offload_total;
        if (a.offload != b.offload) return a.offload < b.offload;
        return a.local < b.local;
    });
}

/// Enumerates all offload splits for UAV y with per-BS bound min(n_f, cap) and
/// total at most total_cap, pairing each with its cost-minimizing local count
/// in [max(0, floor - O), max(., total_cap - O)]. Rows come back sorted by
/// cost with deterministic tie order.
inline std::vector<Row> build_rows(const CostModel& model, std::size_t y, std::int64_t floor_total,
                                   std::int64_t total_cap) {
    const std::size_t f_n = model.prob.bs_count();
    std::vector<std::int64_t> caps(f_n);
    for (std::size_t f = 0; f < f_n; ++f) {
        caps[f] = std::min(model.prob.worker_caps[f], total_cap);
    }
    std::vector<Row> rows;
    std::vector<std::int64_t> current(f_n, 0);
    const Fp local_rate = model.local_fp[y];

    auto emit = [&](std::int64_t offload_total) {
        Fp base = model.decode_fp[y];
        for (std::size_t f = 0; f < f_n; ++f) base += current[f] * model.offload_fp[y][f];
        const std::int64_t lo = std::max<std::int64_t>(0, floor_total - offload_total);
        const std::int64_t hi = std::max(lo, total_cap - offload_total);
        std::int64_t best_local = lo;
        Fp best_tail = std::numeric_limits<Fp>::max();
        for (std::int64_t l = lo; l <= hi; ++l) {
            const Fp tail = l * local_rate + model.recourse_cost_fp(y, l, offload_total);
            if (tail < best_tail) {
                best_tail = tail;
                best_local = l;
            }
        }
        Row r;
        r.offload = current;
        r.offload_total = offload_total;
        r.local = best_local;
        r.recourse = model.recourse_cost_fp(y, best_local, offload_total);
        r.stage1 = base + best_local * local_rate;
        r.cost = r.stage1 + r.recourse;
        rows.push_back(std::move(r));
    };

    // odometer over offload vectors under the total cap, last BS fastest
    std::int64_t used = 0;
    while (true) {
        emit(used);
        bool advanced = false;
        std::size_t f = f_n;
        while (f > 0) {
            --f;
            if (current[f] < caps[f] && used < total_cap) {
                ++current[f];
                ++used;
                advanced = true;
                break;
            }
            used -= current[f];
            current[f] = 0;
        }
        if (!advanced) break;
    }
    sort_rows(rows);
    return rows;
}

/// Tie-break key over complete allocations: smaller total offload first, then
/// lexicographically smaller offload matrix in (UAV, BS) order, then smaller
/// local vector.
inline std::vector<std::int64_t> allocation_key(const std::vector<const Row*>& choice) {
    std::vector<std::int64_t> key;
    std::int64_t total = 0;
    for (const Row* r : choice) total += r->offload_total;
    key.push_back(total);
    for (const Row* r : choice) key.insert(key.end(), r->offload.begin(), r->offload.end());
    for (const Row* r : choice) key.push_back(r->local);
    return key;
}

struct BnbResult {
    std::vector<const Row*> choice;
    Fp total = 0;
    std::uint64_t nodes = 0;
};

/// Depth-first branch and bound over the capacity-coupled offload matrix.
///
/// Lower bound: a knapsack relaxation that pools the per-BS capacities into
/// one aggregate budget. For every undecided UAV only its cheapest
/// individually-feasible row per offload total survives, and a small DP picks
/// the best way to spend the pooled budget across those UAVs. The relaxation
/// drops only the per-BS split of the capacity, so it is admissible and tight
/// enough to keep the tree near the greedy descent. Ties on cost fall back to
/// the allocation key, so the returned optimum is unique and reproducible.
class BranchAndBound {
public:
    explicit BranchAndBound(const std::vector<std::vector<Row>>& rows,
                            const std::vector<std::int64_t>& caps)
        : rows_(rows), caps_(caps) {}

    BnbResult run() {
        const std::size_t y_n = rows_.size();
        choice_.assign(y_n, nullptr);
        best_cost_ = std::numeric_limits<Fp>::max();
        nodes_ = 0;
        rem_ = caps_;
        o_cap_.assign(y_n, 0);
        for (std::size_t y = 0; y < y_n; ++y) {
            for (const Row& r : rows_[y]) o_cap_[y] = std::max(o_cap_[y], r.offload_total);
        }
        dfs(0, 0);
        if (best_choice_.empty()) {
            throw Error(Errc::infeasible_point, "no feasible allocation under worker capacities");
        }
        return BnbResult{best_choice_, best_cost_, nodes_};
    }

private:
    static constexpr Fp kInf = std::numeric_limits<Fp>::max();

    bool fits(const Row& r) const {
        for (std::size_t f = 0; f < rem_.size(); ++f) {
            if (r.offload[f] > rem_[f]) return false;
        }
        return true;
    }

    // dp[b] = lower bound on completing UAVs [from, Y) with at most b pooled
    // offload units; monotone nonincreasing in b
    std::vector<Fp> pooled_bound(std::size_t from, std::int64_t budget) const {
        std::vector<Fp> dp(static_cast<std::size_t>(budget) + 1, 0);
        std::vector<Fp> next(dp.size());
        std::vector<Fp> cheapest;
        for (std::size_t y = rows_.size(); y-- > from;) {
            cheapest.assign(static_cast<std::size_t>(std::min(o_cap_[y], budget)) + 1, kInf);
            for (const Row& r : rows_[y]) {
                if (r.offload_total >= static_cast<std::int64_t>(cheapest.size())) continue;
                auto& slot = cheapest[static_cast<std::size_t>(r.offload_total)];
                if (slot == kInf && fits(r)) slot = r.cost; // rows are cost-sorted
            }
            for (std::int64_t b = 0; b <= budget; ++b) {
                Fp best = kInf;
                const std::int64_t o_hi = std::min<std::int64_t>(b, static_cast<std::int64_t>(cheapest.size()) - 1);
                for (std::int64_t o = 0; o <= o_hi; ++o) {
                    const Fp g = cheapest[static_cast<std::size_t>(o)];
                    if (g == kInf) continue;
                    const Fp rest = dp[static_cast<std::size_t>(b - o)];
                    if (rest == kInf) continue;
                    best = std::min(best, g + rest);
                }
                next[static_cast<std::size_t>(b)] = best;
            }
            dp.swap(next);
        }
        return dp;
    }

    void dfs(std::size_t y, Fp acc) {
        ++nodes_;
        if (y == rows_.size()) {
            if (acc < best_cost_) {
                best_cost_ = acc;
                best_choice_ = choice_;
                best_key_ = allocation_key(best_choice_);
            } else if (acc == best_cost_) {
                auto key = allocation_key(choice_);
                if (key < best_key_) {
                    best_choice_ = choice_;
                    best_key_ = std::move(key);
                }
            }
            return;
        }
        std::int64_t budget = 0;
        for (std::int64_t r : rem_) budget += r;
        // pooling beyond what the remaining UAVs could ever offload is useless
        std::int64_t useful = 0;
        for (std::size_t i = y + 1; i < rows_.size(); ++i) useful += o_cap_[i];
        const std::int64_t pooled = std::min(budget, useful);
        const std::vector<Fp> tail = pooled_bound(y + 1, pooled);
        const Fp tail_floor = tail[static_cast<std::size_t>(pooled)];
        if (tail_floor == kInf) return; // no feasible completion below this node
        for (const Row& r : rows_[y]) {
            const Fp candidate = acc + r.cost;
            if (best_cost_ != kInf && candidate + tail_floor > best_cost_) {
                break; // rows are cost-sorted: nothing later can do better
            }
            if (!fits(r)) continue;
            const Fp t = tail[static_cast<std::size_t>(
                std::min(budget - r.offload_total, pooled))];
            if (t == kInf) continue;
            if (best_cost_ != kInf && candidate + t > best_cost_) continue;
            for (std::size_t f = 0; f < rem_.size(); ++f) rem_[f] -= r.offload[f];
            choice_[y] = &r;
            dfs(y + 1, candidate);
            for (std::size_t f = 0; f < rem_.size(); ++f) rem_[f] += r.offload[f];
        }
        choice_[y] = nullptr;
    }

    const std::vector<std::vector<Row>>& rows_;
    const std::vector<std::int64_t>& caps_;
    std::vector<std::int64_t> rem_;
    std::vector<std::int64_t> o_cap_;
    std::vector<const Row*> choice_;
    std::vector<const Row*> best_choice_;
    std::vector<std::int64_t> best_key_;
    Fp best_cost_ = 0;
    std::uint64_t nodes_ = 0;
};

inline SolveReport report_from_rows(const CostModel& model, const std::vector<const Row*>& choice,
                                    std::uint64_t nodes, Method method) {
    const std::size_t y_n = model.prob.uav_count();
    SolveReport rep;
    rep.method = method;
    rep.nodes_explored = nodes;
    rep.fixed_point_scale = model.opts.fixed_point_scale;
    rep.allocation.local.resize(y_n);
    rep.allocation.offload.resize(y_n);
    rep.per_uav.resize(y_n);
    for (std::size_t y = 0; y < y_n; ++y) {
        const Row& r = *choice[y];
        rep.allocation.local[y] = r.local;
        rep.allocation.offload[y] = r.offload;
        rep.per_uav[y].local_copies = r.local;
        rep.per_uav[y].offload_copies = r.offload_total;
        rep.per_uav[y].stage1_fp = r.stage1;
        rep.per_uav[y].recourse_fp = r.recourse;
        rep.stage1_fp += r.stage1;
        rep.recourse_fp += r.recourse;
    }
    rep.total_fp = rep.stage1_fp + rep.recourse_fp;
    const double scale = static_cast<double>(model.opts.fixed_point_scale);
    rep.stage1_cost = static_cast<double>(rep.stage1_fp) / scale;
    rep.expected_recourse_cost = static_cast<double>(rep.recourse_fp) / scale;
    rep.total_cost = static_cast<double>(rep.total_fp) / scale;
    // closed-form recourse per scenario
    rep.allocation.recourse.assign(y_n, {});
    for (std::size_t y = 0; y < y_n; ++y) {
        rep.allocation.recourse[y].resize(model.set.scenarios.size());
        const std::int64_t total = rep.allocation.local[y] + choice[y]->offload_total;
        for (std::size_t w = 0; w < model.set.scenarios.size(); ++w) {
            const Scenario& s = model.set.scenarios[w];
            rep.allocation.recourse[y][w] =
                recourse_copies_one(total, choice[y]->offload_total, s.shortfall_flags[y] != 0,
                                    s.shortfall_counts[y], model.k,
                                    model.opts.clamp_shortfall_to_offload);
        }
    }
    return rep;
}

} // namespace detail

/// Exact deterministic program: minimize first-stage cost subject to per-UAV
/// demand k + S_y and worker capacities.
inline SolveReport solve_dip(const PlanningProblem& prob,
                             const std::vector<std::int64_t>& fixed_shortfall,
                             const SolverOptions& opts = {}) {
    static const ScenarioSet kEmptySet{};
    detail::CostModel model(prob, kEmptySet, opts);
    if (fixed_shortfall.size() != prob.uav_count()) {
        throw Error(Errc::dimension_mismatch, "fixed shortfall vector does not match UAV count");
    }
    std::vector<std::vector<detail::Row>> rows;
    rows.reserve(prob.uav_count());
    for (std::size_t y = 0; y < prob.uav_count(); ++y) {
        if (fixed_shortfall[y] < 0) {
            throw Error(Errc::validation, "fixed shortfall must be nonnegative");
        }
        const std::int64_t demand = prob.recovery_threshold + fixed_shortfall[y];
        rows.push_back(detail::build_rows(model, y, demand, demand));
    }
    detail::BranchAndBound bnb(rows, prob.worker_caps);
    const detail::BnbResult res = bnb.run();
    return detail::report_from_rows(model, res.choice, res.nodes, Method::dip);
}

/// Exact two-stage stochastic program. The second stage is substituted in
/// closed form, making this a pure integer search over the first stage; the
/// capacity coupling is resolved by branch and bound.
inline SolveReport solve_sip(const PlanningProblem& prob, const ScenarioSet& scenario_set,
                             const SolverOptions& opts = {}) {
    const ScenarioSet set = validate(scenario_set, prob.recovery_threshold);
    detail::CostModel model(prob, set, opts);
    std::vector<std::vector<detail::Row>> rows;
    rows.reserve(prob.uav_count());
    for (std::size_t y = 0; y < prob.uav_count(); ++y) {
        rows.push_back(detail::build_rows(model, y, model.k, model.t_max));
    }
    detail::BranchAndBound bnb(rows, prob.worker_caps);
    const detail::BnbResult res = bnb.run();
    return detail::report_from_rows(model, res.choice, res.nodes, Method::sip);
}

/// Expected-value baseline: replace the distribution by the rounded mean
/// shortfall, solve the deterministic program, then score that first stage
/// against the full scenario set.
inline SolveReport solve_evf(const PlanningProblem& prob, const ScenarioSet& scenario_set,
                             const SolverOptions& opts = {}) {
    const ScenarioSet set = validate(scenario_set, prob.recovery_threshold);
    const std::vector<double> mean = expected_shortfall(set);
    std::vector<std::int64_t> rounded(mean.size());
    for (std::size_t y = 0; y < mean.size(); ++y) {
        rounded[y] = opts.evf_rounding == EvfRounding::ceiling
                         ? static_cast<std::int64_t>(std::ceil(mean[y]))
                         : static_cast<std::int64_t>(std::floor(mean[y] + 0.5));
    }
    SolveReport dip = solve_dip(prob, rounded, opts);
    // re-score the fixed first stage under uncertainty
    detail::CostModel model(prob, set, opts);
    SolveReport rep = dip;
    rep.method = Method::evf;
    rep.recourse_fp = 0;
    rep.allocation.recourse.assign(prob.uav_count(), {});
    for (std::size_t y = 0; y < prob.uav_count(); ++y) {
        const std::int64_t o = rep.allocation.offload_total(y);
        const std::int64_t l = rep.allocation.local[y];
        const Fp rec = model.recourse_cost_fp(y, l, o);
        rep.per_uav[y].recourse_fp = rec;
        rep.recourse_fp += rec;
        rep.allocation.recourse[y].resize(set.scenarios.size());
        for (std::size_t w = 0; w < set.scenarios.size(); ++w) {
            const Scenario& s = set.scenarios[w];
            rep.allocation.recourse[y][w] =
                recourse_copies_one(l + o, o, s.shortfall_flags[y] != 0, s.shortfall_counts[y],
                                    model.k, opts.clamp_shortfall_to_offload);
        }
    }
    rep.total_fp = rep.stage1_fp + rep.recourse_fp;
    const double scale = static_cast<double>(opts.fixed_point_scale);
    rep.expected_recourse_cost = static_cast<double>(rep.recourse_fp) / scale;
    rep.total_cost = static_cast<double>(rep.total_fp) / scale;
    return rep;
}

/// Exhaustive enumeration over every integer first stage within the search
/// bounds. Deliberately naive; exists to certify the branch-and-bound result.
inline SolveReport brute_force_oracle(const PlanningProblem& prob, const ScenarioSet& scenario_set,
                                      const SolverOptions& opts = {}) {
    const ScenarioSet set = validate(scenario_set, prob.recovery_threshold);
    detail::CostModel model(prob, set, opts);
    const std::size_t y_n = prob.uav_count();
    const std::size_t f_n = prob.bs_count();
    const std::int64_t local_hi = model.t_max;
    std::vector<std::int64_t> offload_hi(y_n * f_n);
    double raw = 1.0;
    for (std::size_t y = 0; y < y_n; ++y) {
        raw *= static_cast<double>(local_hi + 1);
        for (std::size_t f = 0; f < f_n; ++f) {
            offload_hi[y * f_n + f] = std::min(prob.worker_caps[f], model.t_max);
            raw *= static_cast<double>(offload_hi[y * f_n + f] + 1);
        }
    }
    if (raw > static_cast<double>(opts.oracle_cap)) {
        throw Error(Errc::oracle_too_large,
                    "oracle search space of " + std::to_string(raw) + " allocations exceeds cap " +
                        std::to_string(opts.oracle_cap));
    }

    std::vector<std::int64_t> local(y_n, 0);
    std::vector<std::int64_t> offload(y_n * f_n, 0);
    std::vector<std::int64_t> col(f_n, 0);
    Fp best_cost = std::numeric_limits<Fp>::max();
    std::vector<std::int64_t> best_local, best_offload, best_key;
    std::uint64_t visited = 0;

    auto key_of = [&]() {
        std::vector<std::int64_t> key;
        std::int64_t total = 0;
        for (std::int64_t v : offload) total += v;
        key.push_back(total);
        key.insert(key.end(), offload.begin(), offload.end());
        key.insert(key.end(), local.begin(), local.end());
        return key;
    };

    while (true) {
        ++visited;
        bool feasible = true;
        for (std::size_t f = 0; f < f_n && feasible; ++f) {
            if (col[f] > prob.worker_caps[f]) feasible = false;
        }
        if (feasible) {
            for (std::size_t y = 0; y < y_n && feasible; ++y) {
                std::int64_t o = 0;
                for (std::size_t f = 0; f < f_n; ++f) o += offload[y * f_n + f];
                if (local[y] + o < model.k) feasible = false;
            }
        }
        if (feasible) {
            Fp cost = 0;
            for (std::size_t y = 0; y < y_n; ++y) {
                std::int64_t o = 0;
                Fp stage = model.decode_fp[y] + local[y] * model.local_fp[y];
                for (std::size_t f = 0; f < f_n; ++f) {
                    stage += offload[y * f_n + f] * model.offload_fp[y][f];
                    o += offload[y * f_n + f];
                }
                cost += stage + model.recourse_cost_fp(y, local[y], o);
            }
            if (cost < best_cost) {
                best_cost = cost;
                best_local = local;
                best_offload = offload;
                best_key = key_of();
            } else if (cost == best_cost) {
                auto key = key_of();
                if (key < best_key) {
                    best_local = local;
                    best_offload = offload;
                    best_key = std::move(key);
                }
            }
        }
        // odometer: advance local vector first, then the offload matrix
        std::size_t i = 0;
        for (; i < y_n; ++i) {
            if (local[i] < local_hi) {
                ++local[i];
                break;
            }
            local[i] = 0;
        }
        if (i < y_n) continue;
        std::size_t j = 0;
        for (; j < offload.size(); ++j) {
            const std::size_t f = j % f_n;
            if (offload[j] < offload_hi[j]) {
                ++offload[j];
                ++col[f];
                break;
            }
            col[f] -= offload[j];
            offload[j] = 0;
        }
        if (j == offload.size()) break;
    }
    if (best_cost == std::numeric_limits<Fp>::max()) {
        throw Error(Errc::infeasible_point, "oracle found no feasible allocation");
    }

    // rebuild a report through the shared bookkeeping
    std::vector<detail::Row> chosen_rows(y_n);
    std::vector<const detail::Row*> choice(y_n);
    for (std::size_t y = 0; y < y_n; ++y) {
        detail::Row r;
        r.offload.assign(best_offload.begin() + static_cast<std::ptrdiff_t>(y * f_n),
                         best_offload.begin() + static_cast<std::ptrdiff_t>((y + 1) * f_n));
        for (std::int64_t v : r.offload) r.offload_total += v;
        r.local = best_local[y];
        r.stage1 = model.decode_fp[y] + r.local * model.local_fp[y];
        for (std::size_t f = 0; f < f_n; ++f) r.stage1 += r.offload[f] * model.offload_fp[y][f];
        r.recourse = model.recourse_cost_fp(y, r.local, r.offload_total);
        r.cost = r.stage1 + r.recourse;
        chosen_rows[y] = std::move(r);
        choice[y] = &chosen_rows[y];
    }
    return detail::report_from_rows(model, choice, visited, Method::oracle);
}

/// Scores a fully specified allocation: validates every constraint, then sums
/// the first-stage cost and the probability-weighted recourse cost.
inline SolveReport evaluate_total_cost(const Allocation& alloc, const PlanningProblem& prob,
                                       const ScenarioSet& scenario_set,
                                       const SolverOptions& opts = {}) {
    const ScenarioSet set = validate(scenario_set, prob.recovery_threshold);
    detail::CostModel model(prob, set, opts);
    const std::size_t y_n = prob.uav_count();
    const std::size_t f_n = prob.bs_count();
    if (alloc.local.size() != y_n || alloc.offload.size() != y_n ||
        alloc.recourse.size() != y_n) {
        throw Error(Errc::dimension_mismatch, "allocation does not match UAV count");
    }
    std::vector<std::int64_t> col(f_n, 0);
    for (std::size_t y = 0; y < y_n; ++y) {
        if (alloc.offload[y].size() != f_n) {
            throw Error(Errc::dimension_mismatch, "allocation does not match BS count");
        }
        if (alloc.recourse[y].size() != set.scenarios.size()) {
            throw Error(Errc::dimension_mismatch, "allocation does not match scenario count");
        }
        if (alloc.local[y] < 0) {
            throw Error(Errc::constraint_violation,
                        "negative local copies for UAV " + std::to_string(y));
        }
        for (std::size_t f = 0; f < f_n; ++f) {
            if (alloc.offload[y][f] < 0) {
                throw Error(Errc::constraint_violation,
                            "negative offload copies for UAV " + std::to_string(y));
            }
            col[f] += alloc.offload[y][f];
        }
        const std::int64_t total = alloc.first_stage_total(y);
        if (total < prob.recovery_threshold) {
            throw Error(Errc::constraint_violation,
                        "recovery-threshold constraint violated: UAV " + std::to_string(y) +
                            " has " + std::to_string(total) + " first-stage copies, needs " +
                            std::to_string(prob.recovery_threshold));
        }
        for (std::size_t w = 0; w < set.scenarios.size(); ++w) {
            const Scenario& s = set.scenarios[w];
            if (alloc.recourse[y][w] < 0) {
                throw Error(Errc::constraint_violation,
                            "negative recourse for UAV " + std::to_string(y));
            }
            const std::int64_t a = opts.clamp_shortfall_to_offload
                                       ? std::min(s.shortfall_counts[y], alloc.offload_total(y))
                                       : s.shortfall_counts[y];
            if (s.shortfall_flags[y] &&
                total + alloc.recourse[y][w] - a < prob.recovery_threshold) {
                throw Error(Errc::constraint_violation,
                            "recourse constraint violated: UAV " + std::to_string(y) +
                                ", scenario " + std::to_string(w));
            }
        }
    }
    for (std::size_t f = 0; f < f_n; ++f) {
        if (col[f] > prob.worker_caps[f]) {
            throw Error(Errc::constraint_violation,
                        "capacity constraint violated: BS " + std::to_string(f) + " assigned " +
                            std::to_string(col[f]) + " copies, capacity " +
                            std::to_string(prob.worker_caps[f]));
        }
    }

    SolveReport rep;
    rep.method = Method::eval;
    rep.fixed_point_scale = opts.fixed_point_scale;
    rep.allocation = alloc;
    rep.per_uav.resize(y_n);
    for (std::size_t y = 0; y < y_n; ++y) {
        Fp stage = model.decode_fp[y] + alloc.local[y] * model.local_fp[y];
        for (std::size_t f = 0; f < f_n; ++f) {
            stage += alloc.offload[y][f] * model.offload_fp[y][f];
        }
        double expected_copies = 0.0;
        for (std::size_t w = 0; w < set.scenarios.size(); ++w) {
            const Scenario& s = set.scenarios[w];
            if (s.shortfall_flags[y]) {
                expected_copies += s.probability * static_cast<double>(alloc.recourse[y][w]);
            }
        }
        const Fp rec = model.recourse_fp_from_copies(y, expected_copies);
        rep.per_uav[y].local_copies = alloc.local[y];
        rep.per_uav[y].offload_copies = alloc.offload_total(y);
        rep.per_uav[y].stage1_fp = stage;
        rep.per_uav[y].recourse_fp = rec;
        rep.stage1_fp += stage;
        rep.recourse_fp += rec;
    }
    rep.total_fp = rep.stage1_fp + rep.recourse_fp;
    const double scale = static_cast<double>(opts.fixed_point_scale);
    rep.stage1_cost = static_cast<double>(rep.stage1_fp) / scale;
    rep.expected_recourse_cost = static_cast<double>(rep.recourse_fp) / scale;
    rep.total_cost = static_cast<double>(rep.total_fp) / scale;
    return rep;
}

/// Fills the closed-form recourse matrix for a given first stage.
inline Allocation make_allocation(const std::vector<std::int64_t>& local,
                                  const std::vector<std::vector<std::int64_t>>& offload,
                                  const ScenarioSet& set, std::int64_t k,
                                  bool clamp_to_offload = false) {
    Allocation a;
    a.local = local;
    a.offload = offload;
    a.recourse.resize(local.size());
    for (std::size_t y = 0; y < local.size(); ++y) {
        std::int64_t o = 0;
        for (std::int64_t v : offload[y]) o += v;
        a.recourse[y].resize(set.scenarios.size());
        for (std::size_t w = 0; w < set.scenarios.size(); ++w) {
            const Scenario& s = set.scenarios[w];
            a.recourse[y][w] = recourse_copies_one(local[y] + o, o, s.shortfall_flags[y] != 0,
                                                   s.shortfall_counts[y], k, clamp_to_offload);
        }
    }
    return a;
}

} // namespace uavplan
