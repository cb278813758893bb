#pragma once

#include <cstdint>
#include <string>

namespace tollsim {

// Internal units are seconds, meters, and cents. Measurement-boundary
// quantities (flow observations, reports) use veh/h, veh/km, km/h, miles
// and dollars with the exact constants below.

using Seconds = std::int64_t;

inline constexpr double kMetersPerMile = 1609.344;
inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr Seconds kDay = 24 * 3600;

inline constexpr double mps_to_kmh(double v) { return v * 3.6; }
inline constexpr double kmh_to_mps(double v) { return v / 3.6; }
inline constexpr double meters_to_miles(double m) { return m / kMetersPerMile; }
inline constexpr double miles_to_meters(double mi) { return mi * kMetersPerMile; }
inline constexpr double seconds_to_hours(double s) { return s / kSecondsPerHour; }
inline constexpr Seconds hours(double h) { return static_cast<Seconds>(h * kSecondsPerHour); }

// Money is carried as integer cents wherever revenue accounting must be
// exact; dollar doubles appear only at the reporting boundary.
using Cents = std::int64_t;

inline constexpr double cents_to_dollars(Cents c) { return static_cast<double>(c) / 100.0; }
inline Cents dollars_to_cents(double d) {
    return static_cast<Cents>(d * 100.0 + (d >= 0 ? 0.5 : -0.5));
}

inline std::string format_time(Seconds t) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld",
                  static_cast<long long>(t / 3600),
                  static_cast<long long>((t / 60) % 60),
                  static_cast<long long>(t % 60));
    return buf;
}

}  // namespace tollsim
