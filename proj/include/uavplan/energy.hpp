#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "uavplan/coding.hpp"
#include "uavplan/errors.hpp"

namespace uavplan {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0; // height above ground
};

/// Rotary-wing airframe constants. weight_n is the weight *force* in newtons;
/// converting a configured mass is the loader's job.
struct RotorcraftParams {
    double weight_n = 99.96;            // W
    double air_density = 1.225;         // rho, kg/m^3
    double rotor_radius = 0.5;          // R, m
    double disc_area = 0.79;            // m^2
    double blade_angular_velocity = 400; // rad/s
    double tip_speed = 200;             // m/s
    double rotor_solidity = 0.05;
    double fuselage_drag_ratio = 0.3;
    double induced_velocity_hover = 7.2; // m/s
    double profile_drag_coeff = 0.012;
    double induced_power_factor = 0.1;
};

struct UavSpec {
    Vec3 position;                 // (x, y, hover height)
    double cpu_hz = 1e9;           // tau_y
    double cycles_per_bit = 20.0;  // C_y
    double bandwidth_hz = 2e6;     // B_y
    double tx_power_w = 0.032;
    double rx_power_w = 0.032;
    RotorcraftParams rotorcraft;
};

struct BsSpec {
    Vec3 position;               // (x, y, mast height)
    double cpu_hz = 2e10;        // tau_f, split evenly across workers
    std::int64_t worker_count = 15; // n_f
    double service_cost = 0.2;   // C_f, per offloaded copy
};

struct RadioConstants {
    double noise_power_w = 1e-13; // N_0, linear watts
    double reference_gain = 1e-6; // beta_0, linear gain at 1 m
};

struct CostCoefficients {
    double alpha_time = 0.6;      // alpha_1, currency per second of work
    double alpha_energy = 4e-4;   // alpha_2, currency per joule
};

/// The four per-UAV payment rates the planner optimizes over.
struct CostRates {
    double local = 0.0;               // per locally computed copy
    std::vector<double> offload;      // per copy, one entry per base station
    double decode = 0.0;              // once per task
    double correction = 0.0;          // per recourse copy, includes hover penalty
};

// Blade profile power constant.
inline double profile_power(const RotorcraftParams& r) {
    const double omega_r = r.blade_angular_velocity * r.rotor_radius;
    return r.profile_drag_coeff / 8.0 * r.air_density * r.rotor_solidity * r.disc_area *
           omega_r * omega_r * omega_r;
}

// Induced power constant.
inline double induced_power(const RotorcraftParams& r) {
    return (1.0 + r.induced_power_factor) * std::pow(r.weight_n, 1.5) /
           std::sqrt(2.0 * r.disc_area * r.air_density);
}

/// Propulsion power of a rotary-wing UAV at forward speed V: blade profile
/// term, induced term, and parasite drag.
inline double propulsion_power(double speed, const RotorcraftParams& r) {
    if (speed < 0.0) throw Error(Errc::validation, "speed must be nonnegative");
    const double v2 = speed * speed;
    const double p0 = profile_power(r);
    const double p1 = induced_power(r);
    const double tip2 = r.tip_speed * r.tip_speed;
    const double v0_2 = r.induced_velocity_hover * r.induced_velocity_hover;
    const double induced = std::sqrt(std::sqrt(1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)) - v2 / (2.0 * v0_2));
    return p0 * (1.0 + 3.0 * v2 / tip2) + p1 * induced +
           0.5 * r.fuselage_drag_ratio * r.air_density * r.disc_area * v2 * speed;
}

inline double hover_power(const RotorcraftParams& r) { return propulsion_power(0.0, r); }

inline double bits_of(double symbols, double bits_per_symbol) { return symbols * bits_per_symbol; }

/// Seconds to compute one copy locally.
inline double local_compute_time(const UavSpec& u, const CodingParams& c, double bits_per_symbol) {
    const double symbols = symbol_counts(c, 0, 0).compute_per_copy;
    return u.cycles_per_bit * bits_of(symbols, bits_per_symbol) / u.cpu_hz;
}

/// Seconds to encode one copy.
inline double encode_time(const UavSpec& u, const CodingParams& c, double bits_per_symbol) {
    const double n2 = static_cast<double>(c.matrix_size) * static_cast<double>(c.matrix_size);
    return u.cycles_per_bit * bits_of(n2, bits_per_symbol) / u.cpu_hz;
}

/// Seconds to decode the returned copies, paid once per task.
inline double decode_time(const UavSpec& u, const CodingParams& c, double bits_per_symbol) {
    const double symbols = symbol_counts(c, 0, 0).decode;
    return u.cycles_per_bit * bits_of(symbols, bits_per_symbol) / u.cpu_hz;
}

/// Line-of-sight air-to-ground channel gain, inverse square in distance.
inline double channel_gain(const Vec3& uav_pos, const Vec3& bs_pos, const RadioConstants& radio) {
    const double dx = uav_pos.x - bs_pos.x;
    const double dy = uav_pos.y - bs_pos.y;
    const double dz = uav_pos.z - bs_pos.z;
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 <= 0.0) {
        throw Error(Errc::degenerate_geometry, "UAV and BS positions coincide");
    }
    return radio.reference_gain / d2;
}

/// Shannon rate of the UAV-to-BS link in bits per second.
inline double transmission_rate(const UavSpec& u, double gain, const RadioConstants& radio) {
    if (!(gain > 0.0)) throw Error(Errc::validation, "channel gain must be positive");
    return u.bandwidth_hz * std::log2(1.0 + u.tx_power_w * gain / radio.noise_power_w);
}

// The return link is modeled with the same bandwidth, power, and gain as the
// uplink. This is the one place that symmetry assumption lives.
inline double downlink_rate(const UavSpec& u, const BsSpec& b, const RadioConstants& radio) {
    return transmission_rate(u, channel_gain(u.position, b.position, radio), radio);
}

/// Seconds to push one copy up to a base station.
inline double offload_time(const UavSpec& u, const BsSpec& b, const CodingParams& c,
                           const RadioConstants& radio, double bits_per_symbol) {
    const double rate = transmission_rate(u, channel_gain(u.position, b.position, radio), radio);
    if (!(rate > 0.0)) throw Error(Errc::unreachable_bs, "zero uplink rate to base station");
    return bits_of(symbol_counts(c, 0, 0).uplink_per_copy, bits_per_symbol) / rate;
}

/// Joules the UAV spends receiving one computed copy back.
inline double receive_energy(const UavSpec& u, const BsSpec& b, const CodingParams& c,
                             const RadioConstants& radio, double bits_per_symbol) {
    const double rate = downlink_rate(u, b, radio);
    if (!(rate > 0.0)) throw Error(Errc::unreachable_bs, "zero downlink rate from base station");
    return u.rx_power_w * bits_of(symbol_counts(c, 0, 0).downlink_per_copy, bits_per_symbol) / rate;
}

/// All four payment rates for one UAV against a set of base stations.
inline CostRates cost_rates(const UavSpec& u, const std::vector<BsSpec>& bss, const CodingParams& c,
                            const CostCoefficients& coeff, const RadioConstants& radio,
                            double bits_per_symbol) {
    const double t_local = local_compute_time(u, c, bits_per_symbol);
    const double t_enc = encode_time(u, c, bits_per_symbol);
    const double t_dec = decode_time(u, c, bits_per_symbol);
    CostRates rates;
    rates.local = coeff.alpha_time * (t_local + t_enc);
    rates.decode = coeff.alpha_time * t_dec;
    rates.correction = coeff.alpha_time * (t_local + t_enc) +
                       coeff.alpha_energy * hover_power(u.rotorcraft) * t_local;
    rates.offload.reserve(bss.size());
    for (const BsSpec& b : bss) {
        const double t_to = offload_time(u, b, c, radio, bits_per_symbol);
        const double e_rx = receive_energy(u, b, c, radio, bits_per_symbol);
        rates.offload.push_back(coeff.alpha_time * (t_to + t_enc) + coeff.alpha_energy * e_rx +
                                b.service_cost);
    }
    return rates;
}

/// Worst-case wait: time to compute and encode all k copies alone. Reported
/// for diagnostics; the hover cost over this window is common to every
/// allocation and is kept out of all objectives.
inline double threshold_time(const UavSpec& u, const CodingParams& c, double bits_per_symbol) {
    return static_cast<double>(c.recovery_threshold) *
           (local_compute_time(u, c, bits_per_symbol) + encode_time(u, c, bits_per_symbol));
}

/// Diagnostic hover cost over the threshold window.
inline double hover_threshold_cost(const UavSpec& u, const CodingParams& c,
                                   const CostCoefficients& coeff, double bits_per_symbol) {
    return coeff.alpha_energy * hover_power(u.rotorcraft) * threshold_time(u, c, bits_per_symbol);
}

} // namespace uavplan
