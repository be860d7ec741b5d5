#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "uavplan/errors.hpp"

namespace uavplan {

enum class SplitMode {
    paper,      // stationary point of k(t) after substituting s = m/t, then round
    minimize_k, // enumerate integer (s,t) with s*t = m, pick the smallest k
};

/// Parameters of the coded matrix-multiplication scheme: an N x N product is
/// sliced with horizontal factor s and vertical factor t (s*t = m, the
/// per-worker storage fraction), and k = t^2(2s-1) returned copies suffice to
/// decode.
struct CodingParams {
    std::int64_t matrix_size = 1;      // N
    std::int64_t storage_fraction = 1; // m
    double split_s = 1.0;              // s, may be a positive rational
    std::int64_t split_t = 1;          // t
    std::int64_t recovery_threshold = 1; // k
};

/// Per-task symbol counts. Decoding work carries a log^2 factor, so these are
/// real-valued in general.
struct SymbolCounts {
    double encode = 0.0;          // total encoding symbols, scales with copies made
    double decode = 0.0;          // one-off decoding symbols
    double uplink_per_copy = 0.0; // symbols sent to each worker
    double downlink_per_copy = 0.0;
    double compute_per_copy = 0.0;
};

/// k = t^2(2s-1). Rejects splits whose threshold is not a positive integer.
inline std::int64_t recovery_threshold(double s, std::int64_t t) {
    if (!(s > 0.0) || t < 1) {
        throw Error(Errc::invalid_split,
                    "invalid split: need s > 0 and t >= 1, got s=" + std::to_string(s) +
                        " t=" + std::to_string(t));
    }
    const double value = static_cast<double>(t) * static_cast<double>(t) * (2.0 * s - 1.0);
    const double rounded = std::nearbyint(value);
    if (std::abs(value - rounded) > 1e-9 * std::max(1.0, std::abs(value)) || rounded < 1.0) {
        throw Error(Errc::invalid_split,
                    "invalid split: t^2(2s-1) = " + std::to_string(value) +
                        " is not a positive integer");
    }
    return static_cast<std::int64_t>(rounded);
}

inline CodingParams make_coding_params(std::int64_t matrix_size, std::int64_t storage_fraction,
                                       double s, std::int64_t t) {
    if (matrix_size < 0) throw Error(Errc::validation, "matrix size must be nonnegative");
    if (storage_fraction < 1) throw Error(Errc::validation, "storage fraction must be >= 1");
    if (std::abs(s * static_cast<double>(t) - static_cast<double>(storage_fraction)) > 1e-9) {
        throw Error(Errc::invalid_split,
                    "invalid split: s*t must equal the storage fraction m (s=" +
                        std::to_string(s) + ", t=" + std::to_string(t) +
                        ", m=" + std::to_string(storage_fraction) + ")");
    }
    CodingParams p;
    p.matrix_size = matrix_size;
    p.storage_fraction = storage_fraction;
    p.split_s = s;
    p.split_t = t;
    p.recovery_threshold = recovery_threshold(s, t);
    return p;
}

/// Picks (s, t) for a given storage fraction m.
///
/// paper mode substitutes s = m/t into the threshold, giving k(t) = 2mt - t^2,
/// takes the continuous stationary point t* = m, and rounds outward to the
/// nearest positive integer t for which s = m/t yields an integer k. For
/// integer m the stationary point itself is always feasible (s = 1, k = m^2).
///
/// minimize_k mode enumerates all integer divisor pairs s*t = m and picks the
/// smallest threshold instead.
inline CodingParams select_split(std::int64_t matrix_size, std::int64_t storage_fraction,
                                 SplitMode mode = SplitMode::paper) {
    const std::int64_t m = storage_fraction;
    if (m < 1) throw Error(Errc::validation, "storage fraction must be >= 1");
    if (mode == SplitMode::minimize_k) {
        std::int64_t best_t = 0, best_k = 0;
        for (std::int64_t t = 1; t <= m; ++t) {
            if (m % t != 0) continue;
            const std::int64_t s = m / t;
            const std::int64_t k = t * t * (2 * s - 1);
            if (best_t == 0 || k < best_k || (k == best_k && t < best_t)) {
                best_t = t;
                best_k = k;
            }
        }
        return make_coding_params(matrix_size, m, static_cast<double>(m / best_t), best_t);
    }
    // Candidates by distance from t* = m, nearer first, smaller t on ties.
    const std::int64_t t_star = m;
    for (std::int64_t offset = 0; offset < 2 * m; ++offset) {
        for (const std::int64_t t : {t_star - offset, t_star + offset}) {
            if (t < 1 || t > 2 * m - 1) continue;
            const std::int64_t k = t * (2 * m - t); // 2mt - t^2, integral for integer t
            if (k < 1) continue;
            return make_coding_params(matrix_size, m,
                                      static_cast<double>(m) / static_cast<double>(t), t);
        }
    }
    throw Error(Errc::infeasible_split,
                "no feasible integer split near the stationary point for m=" + std::to_string(m));
}

/// Symbol counts for one task given the first-stage copy counts. Only the
/// encoding total depends on how many copies are made.
inline SymbolCounts symbol_counts(const CodingParams& p, std::int64_t local_copies,
                                  std::int64_t offload_copies_total) {
    if (local_copies < 0 || offload_copies_total < 0) {
        throw Error(Errc::validation, "copy counts must be nonnegative");
    }
    const double n2 = static_cast<double>(p.matrix_size) * static_cast<double>(p.matrix_size);
    const double n3 = n2 * static_cast<double>(p.matrix_size);
    const double k = static_cast<double>(p.recovery_threshold);
    const double log_k = std::log2(k);
    SymbolCounts c;
    c.uplink_per_copy = n2 / static_cast<double>(p.storage_fraction);
    c.downlink_per_copy = n2 / (static_cast<double>(p.split_t) * static_cast<double>(p.split_t));
    c.compute_per_copy = n3 / (static_cast<double>(p.storage_fraction) * static_cast<double>(p.split_t));
    c.decode = n2 * k * log_k * log_k;
    c.encode = n2 * static_cast<double>(local_copies + offload_copies_total);
    return c;
}

} // namespace uavplan
