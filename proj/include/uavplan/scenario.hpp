#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "uavplan/errors.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

/// One realization of the uncertainty: which UAVs lost copies and how many.
/// flag 0 forces a zero count; flag 1 requires 1 <= count <= k.
struct Scenario {
    std::vector<std::uint8_t> shortfall_flags;  // F_y
    std::vector<std::int64_t> shortfall_counts; // A_y
    double probability = 0.0;
};

struct ScenarioSet {
    std::vector<Scenario> scenarios;
    std::int64_t uav_count = 0;

    std::int64_t max_shortfall() const {
        std::int64_t a = 0;
        for (const Scenario& s : scenarios)
            for (std::int64_t v : s.shortfall_counts) a = std::max(a, v);
        return a;
    }
};

constexpr double kProbabilitySumTolerance = 1e-9;

/// Checks every scenario invariant against the recovery threshold k and
/// returns the set with probabilities renormalized. Ordering is preserved.
inline ScenarioSet validate(const ScenarioSet& set, std::int64_t k) {
    if (set.scenarios.empty()) throw Error(Errc::malformed_scenario, "scenario set is empty");
    if (set.uav_count < 1) throw Error(Errc::dimension_mismatch, "scenario set has no UAVs");
    const std::size_t y = static_cast<std::size_t>(set.uav_count);
    double sum = 0.0;
    for (std::size_t i = 0; i < set.scenarios.size(); ++i) {
        const Scenario& s = set.scenarios[i];
        if (s.shortfall_flags.size() != y || s.shortfall_counts.size() != y) {
            throw Error(Errc::dimension_mismatch,
                        "scenario " + std::to_string(i) + " has wrong vector length");
        }
        if (s.probability < 0.0) {
            throw Error(Errc::inconsistent_distribution,
                        "scenario " + std::to_string(i) + " has negative probability");
        }
        for (std::size_t u = 0; u < y; ++u) {
            const bool failed = s.shortfall_flags[u] != 0;
            const std::int64_t a = s.shortfall_counts[u];
            if (!failed && a != 0) {
                throw Error(Errc::malformed_scenario,
                            "scenario " + std::to_string(i) + ": UAV " + std::to_string(u) +
                                " has no shortfall flag but count " + std::to_string(a));
            }
            if (failed && a < 1) {
                throw Error(Errc::malformed_scenario,
                            "scenario " + std::to_string(i) + ": UAV " + std::to_string(u) +
                                " flagged but count is " + std::to_string(a));
            }
            if (a > k) {
                throw Error(Errc::invalid_shortfall,
                            "scenario " + std::to_string(i) + ": UAV " + std::to_string(u) +
                                " shortfall " + std::to_string(a) + " exceeds recovery threshold " +
                                std::to_string(k));
            }
        }
        sum += s.probability;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
        throw Error(Errc::inconsistent_distribution,
                    "scenario probabilities sum to " + std::to_string(sum) + ", expected 1");
    }
    ScenarioSet out = set;
    for (Scenario& s : out.scenarios) s.probability /= sum;
    return out;
}

/// Distribution of the shortfall magnitude given a failure: weights over
/// counts 1..k, normalized on construction.
struct ShortfallDistribution {
    std::vector<double> weights; // weights[i] is the probability of count i+1

    static ShortfallDistribution point_mass(std::int64_t count) {
        if (count < 1) throw Error(Errc::validation, "shortfall count must be >= 1");
        ShortfallDistribution d;
        d.weights.assign(static_cast<std::size_t>(count), 0.0);
        d.weights.back() = 1.0;
        return d;
    }

    static ShortfallDistribution from_weights(const std::vector<double>& w) {
        if (w.empty()) throw Error(Errc::validation, "shortfall distribution is empty");
        double sum = 0.0;
        for (double v : w) {
            if (v < 0.0) throw Error(Errc::validation, "shortfall weights must be nonnegative");
            sum += v;
        }
        if (sum <= 0.0) throw Error(Errc::validation, "shortfall weights sum to zero");
        if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
            throw Error(Errc::inconsistent_distribution,
                        "shortfall weights sum to " + std::to_string(sum) + ", expected 1");
        }
        ShortfallDistribution d;
        d.weights = w;
        for (double& v : d.weights) v /= sum;
        return d;
    }

    /// Most probable count, smallest on ties.
    std::int64_t mode() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < weights.size(); ++i)
            if (weights[i] > weights[best]) best = i;
        return static_cast<std::int64_t>(best) + 1;
    }

    std::int64_t draw(Rng& rng) const {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return static_cast<std::int64_t>(i) + 1;
        }
        return static_cast<std::int64_t>(weights.size());
    }
};

enum class GenerationMode {
    enumerate, // 2^Y flag vectors, failed UAVs carry the distribution's mode
    expand,    // additionally branch each failed UAV over the full support
    sample,    // 2^Y flag vectors, failed UAVs carry a seeded draw
};

/// Enumerates the scenario set induced by independent per-UAV failures with
/// probability q. Flag vectors follow binary counting with UAV 0 as the least
/// significant bit, so output order is canonical. Zero-probability scenarios
/// are dropped. Failed UAVs carry the distribution's mode; expand branches
/// over the whole support instead, and sample draws one count per failed UAV
/// from the seeded stream.
inline ScenarioSet generate_independent(std::int64_t uav_count, double fail_prob,
                                        const ShortfallDistribution& dist,
                                        GenerationMode mode = GenerationMode::enumerate,
                                        std::uint64_t enumeration_cap = (1ull << 20),
                                        std::uint64_t sample_seed = 0) {
    if (uav_count < 1) throw Error(Errc::validation, "need at least one UAV");
    if (uav_count > 62) {
        throw Error(Errc::scenario_explosion,
                    "cannot enumerate failure combinations for " + std::to_string(uav_count) +
                        " UAVs");
    }
    if (!(fail_prob >= 0.0 && fail_prob <= 1.0)) {
        throw Error(Errc::validation, "failure probability must lie in [0, 1]");
    }
    std::vector<std::pair<std::int64_t, double>> support;
    for (std::size_t i = 0; i < dist.weights.size(); ++i) {
        if (dist.weights[i] > 0.0) {
            support.emplace_back(static_cast<std::int64_t>(i) + 1, dist.weights[i]);
        }
    }
    const double branch = mode == GenerationMode::expand ? static_cast<double>(support.size()) : 1.0;
    if (std::pow(1.0 + branch, static_cast<double>(uav_count)) >
        static_cast<double>(enumeration_cap)) {
        throw Error(Errc::scenario_explosion,
                    "scenario enumeration for " + std::to_string(uav_count) +
                        " UAVs exceeds the cap of " + std::to_string(enumeration_cap));
    }
    const std::int64_t mode_count = dist.mode();
    Rng sample_rng(sample_seed);
    ScenarioSet set;
    set.uav_count = uav_count;
    const std::uint64_t combos = 1ull << uav_count;
    for (std::uint64_t bits = 0; bits < combos; ++bits) {
        double p = 1.0;
        Scenario base;
        base.shortfall_flags.assign(static_cast<std::size_t>(uav_count), 0);
        base.shortfall_counts.assign(static_cast<std::size_t>(uav_count), 0);
        std::vector<std::size_t> failed;
        for (std::int64_t u = 0; u < uav_count; ++u) {
            if ((bits >> u) & 1ull) {
                base.shortfall_flags[static_cast<std::size_t>(u)] = 1;
                failed.push_back(static_cast<std::size_t>(u));
                p *= fail_prob;
            } else {
                p *= 1.0 - fail_prob;
            }
        }
        if (p <= 0.0) continue;
        if (mode != GenerationMode::expand || failed.empty()) {
            for (std::size_t u : failed) {
                base.shortfall_counts[u] =
                    mode == GenerationMode::sample ? dist.draw(sample_rng) : mode_count;
            }
            base.probability = p;
            set.scenarios.push_back(std::move(base));
            continue;
        }
        // Expand: odometer over the support, earlier failed UAV cycles slowest.
        std::vector<std::size_t> idx(failed.size(), 0);
        while (true) {
            Scenario s = base;
            double ps = p;
            for (std::size_t j = 0; j < failed.size(); ++j) {
                s.shortfall_counts[failed[j]] = support[idx[j]].first;
                ps *= support[idx[j]].second;
            }
            s.probability = ps;
            set.scenarios.push_back(std::move(s));
            std::size_t j = failed.size();
            while (j > 0 && ++idx[j - 1] == support.size()) idx[--j] = 0;
            if (j == 0) break;
        }
    }
    double sum = 0.0;
    for (const Scenario& s : set.scenarios) sum += s.probability;
    for (Scenario& s : set.scenarios) s.probability /= sum;
    return set;
}

/// Per-UAV expected shortfall E[F_y * A_y].
inline std::vector<double> expected_shortfall(const ScenarioSet& set) {
    std::vector<double> mean(static_cast<std::size_t>(set.uav_count), 0.0);
    for (const Scenario& s : set.scenarios) {
        for (std::size_t u = 0; u < mean.size(); ++u) {
            if (s.shortfall_flags[u]) {
                mean[u] += s.probability * static_cast<double>(s.shortfall_counts[u]);
            }
        }
    }
    return mean;
}

/// Index of a scenario drawn proportionally to probability.
inline std::size_t sample_index(const ScenarioSet& set, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < set.scenarios.size(); ++i) {
        acc += set.scenarios[i].probability;
        if (u < acc) return i;
    }
    return set.scenarios.size() - 1;
}

inline const Scenario& sample(const ScenarioSet& set, Rng& rng) {
    return set.scenarios[sample_index(set, rng)];
}

inline const Scenario& sample(const ScenarioSet& set, std::uint64_t seed) {
    Rng rng(seed);
    return sample(set, rng);
}

// ---------------------------------------------------------------------------
// Scenario file format: comma-delimited, one row per scenario,
//   p, F_1..F_Y, A_1..A_Y
// with a mandatory header row and '#' comment lines.
// ---------------------------------------------------------------------------

inline ScenarioSet read_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse, "cannot open scenario file: " + path);
    std::string line;
    bool header_seen = false;
    std::int64_t uav_count = 0;
    ScenarioSet set;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
        if (trimmed.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(trimmed);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!header_seen) {
            if (fields.empty() || (fields[0] != "p" && fields[0] != "P")) {
                throw Error(Errc::parse, path + ":" + std::to_string(line_no) +
                                             ": header row starting with 'p' is required");
            }
            if (fields.size() < 3 || (fields.size() - 1) % 2 != 0) {
                throw Error(Errc::parse, path + ":" + std::to_string(line_no) +
                                             ": header must list p, F_1..F_Y, A_1..A_Y");
            }
            uav_count = static_cast<std::int64_t>((fields.size() - 1) / 2);
            header_seen = true;
            continue;
        }
        if (fields.size() != static_cast<std::size_t>(1 + 2 * uav_count)) {
            throw Error(Errc::parse, path + ":" + std::to_string(line_no) + ": expected " +
                                         std::to_string(1 + 2 * uav_count) + " fields, got " +
                                         std::to_string(fields.size()));
        }
        Scenario s;
        try {
            s.probability = std::stod(fields[0]);
            for (std::int64_t u = 0; u < uav_count; ++u) {
                const long fl = std::stol(fields[static_cast<std::size_t>(1 + u)]);
                if (fl != 0 && fl != 1) {
                    throw Error(Errc::malformed_scenario,
                                path + ":" + std::to_string(line_no) + ": flag must be 0 or 1");
                }
                s.shortfall_flags.push_back(static_cast<std::uint8_t>(fl));
                s.shortfall_counts.push_back(
                    std::stol(fields[static_cast<std::size_t>(1 + uav_count + u)]));
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error(Errc::parse,
                        path + ":" + std::to_string(line_no) + ": malformed numeric field");
        }
        set.scenarios.push_back(std::move(s));
    }
    if (!header_seen) throw Error(Errc::parse, path + ": missing header row");
    set.uav_count = uav_count;
    return set;
}

inline void write_scenario_file(const ScenarioSet& set, std::ostream& out) {
    out << "p";
    for (std::int64_t u = 1; u <= set.uav_count; ++u) out << ",F" << u;
    for (std::int64_t u = 1; u <= set.uav_count; ++u) out << ",A" << u;
    out << "\n";
    char buf[64];
    for (const Scenario& s : set.scenarios) {
        std::snprintf(buf, sizeof buf, "%.17g", s.probability);
        out << buf;
        for (std::uint8_t f : s.shortfall_flags) out << ',' << static_cast<int>(f);
        for (std::int64_t a : s.shortfall_counts) out << ',' << a;
        out << "\n";
    }
}

} // namespace uavplan
