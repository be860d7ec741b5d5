#pragma once

#include <cstdint>
#include <vector>

#include "uavplan/coding.hpp"
#include "uavplan/energy.hpp"
#include "uavplan/errors.hpp"
#include "uavplan/solver.hpp"

namespace uavplan {

/// A fully specified network: who is where, with what hardware, under which
/// coding scheme and prices.
struct NetworkInstance {
    std::vector<UavSpec> uavs;
    std::vector<BsSpec> bss;
    RadioConstants radio;
    CostCoefficients coefficients;
    CodingParams coding;
    double bits_per_symbol = 64.0;
};

/// Collapses the physical model into the per-copy rate table the solvers
/// consume.
inline PlanningProblem make_problem(const NetworkInstance& inst) {
    if (inst.uavs.empty()) throw Error(Errc::validation, "instance has no UAVs");
    PlanningProblem p;
    p.recovery_threshold = inst.coding.recovery_threshold;
    p.worker_caps.reserve(inst.bss.size());
    for (const BsSpec& b : inst.bss) p.worker_caps.push_back(b.worker_count);
    p.local_cost.reserve(inst.uavs.size());
    for (const UavSpec& u : inst.uavs) {
        const CostRates rates =
            cost_rates(u, inst.bss, inst.coding, inst.coefficients, inst.radio, inst.bits_per_symbol);
        p.local_cost.push_back(rates.local);
        p.decode_cost.push_back(rates.decode);
        p.correction_cost.push_back(rates.correction);
        p.offload_cost.push_back(rates.offload);
    }
    return p;
}

/// Keeps only the first y UAVs; used by the scalability study.
inline NetworkInstance truncate_uavs(const NetworkInstance& inst, std::size_t y) {
    NetworkInstance out = inst;
    if (y < out.uavs.size()) out.uavs.resize(y);
    return out;
}

} // namespace uavplan
