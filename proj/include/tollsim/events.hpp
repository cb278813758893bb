#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "tollsim/text.hpp"
#include "tollsim/units.hpp"

namespace tollsim {

enum class EventKind : std::uint8_t {
    depart,
    link_enter,
    link_leave,
    arrive,
    act_start,
    act_end,
    toll_charged,
    sav_request,
    sav_pickup,
    sav_dropoff,
    sav_empty_drive,
    stuck,
};

inline constexpr std::array<const char*, 12> kEventKindNames = {
    "depart",      "link_enter", "link_leave",  "arrive",
    "act_start",   "act_end",    "toll_charged", "sav_request",
    "sav_pickup",  "sav_dropoff", "sav_empty_drive", "stuck"};

inline const char* to_string(EventKind k) { return kEventKindNames[static_cast<std::size_t>(k)]; }

inline EventKind event_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kEventKindNames.size(); ++i)
        if (s == kEventKindNames[i]) return static_cast<EventKind>(i);
    throw ParseError("unknown event kind '" + std::string(s) + "'");
}

// One timestamped simulation event. `mode` carries the trip mode on
// depart/arrive and the activity type on act_start/act_end. `cents` is the
// charge on toll_charged; `meters` is the occupied distance on sav_dropoff.
struct Event {
    Seconds time = 0;
    EventKind kind = EventKind::depart;
    std::string agent;
    std::string vehicle;
    std::string link;
    std::string mode;
    Cents cents = 0;
    double meters = 0;

    bool operator==(const Event&) const = default;
};

using EventLog = std::vector<Event>;

namespace detail {
inline void append_double(std::string& out, double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    out.append(buf, p);
}
}  // namespace detail

// Line-delimited, stable field order:
//   time,kind,agent,vehicle,link,mode,cents,meters
inline std::string serialize_events(const EventLog& log) {
    std::string out;
    out.reserve(log.size() * 48 + 64);
    out += "# tollsim events v1\n";
    out += "time,kind,agent,vehicle,link,mode,cents,meters\n";
    for (const Event& e : log) {
        out += std::to_string(e.time);
        out += ',';
        out += to_string(e.kind);
        out += ',';
        out += e.agent;
        out += ',';
        out += e.vehicle;
        out += ',';
        out += e.link;
        out += ',';
        out += e.mode;
        out += ',';
        out += std::to_string(e.cents);
        out += ',';
        detail::append_double(out, e.meters);
        out += '\n';
    }
    return out;
}

inline EventLog parse_events(const std::vector<std::string>& lines) {
    EventLog log;
    for (const std::string& raw : lines) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.substr(0, 5) == "time,") continue;
        auto f = split(line, ',');
        if (f.size() != 8) throw ParseError("event record needs 8 fields: " + raw);
        Event e;
        e.time = parse_int(f[0], "time");
        e.kind = event_kind_from_string(f[1]);
        e.agent = f[2];
        e.vehicle = f[3];
        e.link = f[4];
        e.mode = f[5];
        e.cents = parse_int(f[6], "cents");
        e.meters = parse_double(f[7], "meters");
        log.push_back(std::move(e));
    }
    return log;
}

inline EventLog load_events(const std::string& path) { return parse_events(read_lines(path)); }

inline void save_events(const EventLog& log, const std::string& path) {
    write_text(path, serialize_events(log));
}

}  // namespace tollsim
