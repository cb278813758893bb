#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tollsim/network.hpp"
#include "tollsim/rng.hpp"
#include "tollsim/text.hpp"
#include "tollsim/units.hpp"

namespace tollsim {

enum class Mode : std::uint8_t { car, pt, walk_bike, av, sav };
inline constexpr std::array<const char*, 5> kModeNames = {"car", "pt", "walk_bike", "av", "sav"};
inline constexpr std::size_t kNumModes = 5;

inline const char* to_string(Mode m) { return kModeNames[static_cast<std::size_t>(m)]; }
inline Mode mode_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kModeNames.size(); ++i)
        if (s == kModeNames[i]) return static_cast<Mode>(i);
    throw ParseError("unknown mode '" + std::string(s) + "'");
}
inline bool is_network_mode(Mode m) { return m == Mode::car || m == Mode::av || m == Mode::sav; }
// car and av drive the agent's own vehicle; sav rides a fleet vehicle
inline bool drives_own_vehicle(Mode m) { return m == Mode::car || m == Mode::av; }
inline bool is_autonomous(Mode m) { return m == Mode::av || m == Mode::sav; }

struct ModeSet {
    std::uint8_t bits = 0;
    void add(Mode m) { bits |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(m)); }
    bool has(Mode m) const { return bits & (1u << static_cast<unsigned>(m)); }
    std::vector<Mode> list() const {
        std::vector<Mode> out;
        for (std::size_t i = 0; i < kNumModes; ++i)
            if (bits & (1u << i)) out.push_back(static_cast<Mode>(i));
        return out;
    }
    bool operator==(const ModeSet&) const = default;
};

enum class ActivityKind : std::uint8_t { Home, Education, Work, Shopping, Leisure };
inline constexpr std::array<const char*, 5> kActivityNames = {"Home", "Education", "Work",
                                                              "Shopping", "Leisure"};
inline const char* to_string(ActivityKind k) { return kActivityNames[static_cast<std::size_t>(k)]; }
inline ActivityKind activity_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kActivityNames.size(); ++i)
        if (s == kActivityNames[i]) return static_cast<ActivityKind>(i);
    throw ParseError("unknown activity type '" + std::string(s) + "'");
}

inline constexpr Seconds kUnbounded = -1;

struct ActivityParams {
    ActivityKind kind = ActivityKind::Home;
    double typical_duration_h = 1.0;
    Seconds opening = kUnbounded;       // earliest time utility accrues
    Seconds closing = kUnbounded;       // may exceed 24 h (wraps past midnight)
    Seconds latest_start = kUnbounded;  // lateness beyond this is penalized
};

// Out-of-home activity attributes; Work tolerates arrivals until 09:00
// before lateness is charged.
inline std::vector<ActivityParams> default_activity_catalog() {
    return {
        {ActivityKind::Home, 14.0, kUnbounded, kUnbounded, kUnbounded},
        {ActivityKind::Education, 5.0, hours(8), hours(22), kUnbounded},
        {ActivityKind::Work, 7.0, hours(7), kUnbounded, hours(9)},
        {ActivityKind::Shopping, 1.0, hours(9), hours(25), kUnbounded},
        {ActivityKind::Leisure, 2.0, hours(9), hours(25), kUnbounded},
    };
}

struct Activity {
    ActivityKind kind = ActivityKind::Home;
    LinkIndex location = 0;
    Seconds planned_end = kUnbounded;  // unset on the last activity of the day
};

struct Trip {
    Mode mode = Mode::car;
    std::vector<LinkIndex> route;  // links to traverse; empty for teleported modes
};

struct Plan {
    std::vector<Activity> activities;  // trips.size() + 1, first and last Home
    std::vector<Trip> trips;
    std::optional<double> score;

    Seconds departure_time(std::size_t trip_idx) const {
        return activities[trip_idx].planned_end;
    }
};

struct DemandError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void validate_plan_structure(const Plan& p) {
    if (p.activities.size() < 2) throw DemandError("plan needs at least two activities");
    if (p.activities.size() != p.trips.size() + 1)
        throw DemandError("plan must alternate activities and trips");
    if (p.activities.front().kind != ActivityKind::Home ||
        p.activities.back().kind != ActivityKind::Home)
        throw DemandError("plan must start and end at Home");
    Seconds prev = 0;
    for (std::size_t i = 0; i + 1 < p.activities.size(); ++i) {
        Seconds end = p.activities[i].planned_end;
        if (end == kUnbounded) throw DemandError("only the last activity may leave its end open");
        if (end < prev) throw DemandError("activity end times must be nondecreasing");
        prev = end;
    }
    for (std::size_t i = 0; i < p.trips.size(); ++i) {
        if (!is_network_mode(p.trips[i].mode) && !p.trips[i].route.empty())
            throw DemandError("teleported trips carry no route");
    }
}

struct Agent {
    std::string id;
    ModeSet availability;
    std::vector<Plan> plans;
    std::size_t selected = 0;

    const Plan& selected_plan() const { return plans[selected]; }
    Plan& selected_plan() { return plans[selected]; }
};

inline constexpr std::size_t kDefaultPlanMemory = 5;

// --- population file format ----------------------------------------------
//
// Line-delimited, one agent per line after the header:
//   # tollsim population v1
//   <id>;<mode|mode|...>;<Type@link@end>;<mode>;<Type@link@end>;...[;score=<v>]
// `end` is seconds past midnight, `-` when open (last activity).

inline std::string serialize_agent_line(const Agent& a, const Network& net,
                                        bool with_score = false) {
    const Plan& p = a.selected_plan();
    std::ostringstream out;
    out << a.id << ';';
    bool first = true;
    for (Mode m : a.availability.list()) {
        if (!first) out << '|';
        out << to_string(m);
        first = false;
    }
    for (std::size_t i = 0; i < p.activities.size(); ++i) {
        const Activity& act = p.activities[i];
        out << ';' << to_string(act.kind) << '@' << net.link(act.location).id << '@';
        if (act.planned_end == kUnbounded)
            out << '-';
        else
            out << act.planned_end;
        if (i < p.trips.size()) out << ';' << to_string(p.trips[i].mode);
    }
    if (with_score && p.score) out << ";score=" << *p.score;
    return out.str();
}

inline std::string serialize_population(const std::vector<Agent>& agents, const Network& net,
                                        bool with_scores = false) {
    std::string out = "# tollsim population v1\n";
    for (const Agent& a : agents) {
        out += serialize_agent_line(a, net, with_scores);
        out += '\n';
    }
    return out;
}

inline Agent parse_agent_line(const std::string& line, const Network& net) {
    auto fields = split(line, ';');
    if (fields.size() < 4) throw DemandError("agent record too short: " + line);
    Agent a;
    a.id = std::string(trim(fields[0]));
    if (a.id.empty()) throw DemandError("agent id missing");
    for (const std::string& m : split(fields[1], '|'))
        if (!trim(m).empty()) a.availability.add(mode_from_string(trim(m)));
    Plan p;
    bool expect_activity = true;
    for (std::size_t i = 2; i < fields.size(); ++i) {
        std::string_view f = trim(fields[i]);
        if (f.substr(0, 6) == "score=") {
            p.score = parse_double(f.substr(6), "score");
            continue;
        }
        if (expect_activity) {
            auto parts = split(f, '@');
            if (parts.size() != 3) throw DemandError("bad activity entry '" + std::string(f) + "'");
            Activity act;
            act.kind = activity_from_string(parts[0]);
            act.location = net.link_index(parts[1]);  // throws on unknown link
            act.planned_end =
                trim(parts[2]) == "-" ? kUnbounded : parse_int(parts[2], "activity end");
            p.activities.push_back(act);
        } else {
            Trip t;
            t.mode = mode_from_string(f);
            p.trips.push_back(t);
        }
        expect_activity = !expect_activity;
    }
    validate_plan_structure(p);
    for (const Trip& t : p.trips)
        if (!a.availability.has(t.mode))
            throw DemandError("agent " + a.id + " plans a trip with unavailable mode " +
                              to_string(t.mode));
    a.plans.push_back(std::move(p));
    a.selected = 0;
    return a;
}

inline std::vector<Agent> parse_population(const std::vector<std::string>& lines,
                                           const Network& net) {
    std::vector<Agent> agents;
    for (const std::string& raw : lines) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        agents.push_back(parse_agent_line(std::string(line), net));
    }
    return agents;
}

inline std::vector<Agent> load_population(const std::string& path, const Network& net) {
    return parse_population(read_lines(path), net);
}

inline void save_population(const std::vector<Agent>& agents, const Network& net,
                            const std::string& path, bool with_scores = false) {
    write_text(path, serialize_population(agents, net, with_scores));
}

// --- scenario generation ---------------------------------------------------

enum class Preset { Base, AVOriented, SAVOriented };
inline const char* to_string(Preset p) {
    switch (p) {
        case Preset::Base: return "base";
        case Preset::AVOriented: return "av-oriented";
        case Preset::SAVOriented: return "sav-oriented";
    }
    return "?";
}
inline Preset preset_from_string(std::string_view s) {
    if (s == "base") return Preset::Base;
    if (s == "av-oriented") return Preset::AVOriented;
    if (s == "sav-oriented") return Preset::SAVOriented;
    throw ParseError("unknown preset '" + std::string(s) + "'");
}

struct Tariff {
    double flat_usd = 0;
    double per_mile_usd = 0;
    double per_minute_usd = 0;
};

// Links eligible per activity kind; filled by the fixture builders.
struct ActivityLinkPools {
    std::vector<LinkIndex> home, education, work, shopping, leisure;

    const std::vector<LinkIndex>& pool(ActivityKind k) const {
        switch (k) {
            case ActivityKind::Home: return home;
            case ActivityKind::Education: return education;
            case ActivityKind::Work: return work;
            case ActivityKind::Shopping: return shopping;
            case ActivityKind::Leisure: return leisure;
        }
        return home;
    }
};

struct ChainTemplate {
    std::string chain;  // e.g. "HWH": Home-Work-Home
    double weight = 1.0;
};

// Catalog targets a 3.5 trips/agent mean: 2-trip weight .15, 3-trip .35,
// 4-trip .35, 5-trip .15.
inline std::vector<ChainTemplate> default_chain_catalog() {
    return {
        {"HWH", 0.10},   {"HEH", 0.05},   {"HWSH", 0.20},  {"HWLH", 0.15},
        {"HWSLH", 0.20}, {"HELSH", 0.15}, {"HWSHLH", 0.15},
    };
}

inline ActivityKind activity_kind_from_letter(char c) {
    switch (c) {
        case 'H': return ActivityKind::Home;
        case 'E': return ActivityKind::Education;
        case 'W': return ActivityKind::Work;
        case 'S': return ActivityKind::Shopping;
        case 'L': return ActivityKind::Leisure;
    }
    throw ParseError(std::string("unknown chain letter '") + c + "'");
}

struct GeneratedScenario {
    Preset preset = Preset::Base;
    std::vector<Agent> agents;
    int fleet_size = 0;
    Tariff tariff;
};

namespace detail {

// Deterministically marks round(n*share) agents via a seeded shuffle.
inline std::vector<bool> draw_share(std::size_t n, double share, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng.next_below(i)]);
    auto count = static_cast<std::size_t>(std::llround(share * static_cast<double>(n)));
    std::vector<bool> out(n, false);
    for (std::size_t i = 0; i < count && i < n; ++i) out[order[i]] = true;
    return out;
}

inline LinkIndex draw_location(const std::vector<LinkIndex>& pool, Rng& rng) {
    if (pool.empty()) throw DemandError("empty activity link pool");
    return pool[rng.next_below(pool.size())];
}

}  // namespace detail

// Builds the synthetic population for one preset. Initial plans use the
// first available mode in priority order; replanning explores the rest.
inline GeneratedScenario generate_scenario(Preset preset, std::size_t n_agents,
                                           const Network& net, const ActivityLinkPools& pools,
                                           std::uint64_t seed,
                                           const std::vector<ChainTemplate>& catalog =
                                               default_chain_catalog(),
                                           const std::vector<ActivityParams>& acts =
                                               default_activity_catalog()) {
    if (n_agents == 0) throw DemandError("n_agents must be positive");
    Rng root(seed);
    Rng gen = root.substream("generation");

    GeneratedScenario out;
    out.preset = preset;

    std::vector<bool> car(n_agents, false), av(n_agents, false);
    bool sav_available = false;
    switch (preset) {
        case Preset::Base: {
            car = detail::draw_share(n_agents, 0.9, gen);
            break;
        }
        case Preset::AVOriented: {
            // 90% adopt a private AV; car ownership persists only among the
            // rest at the base-case rate.
            av = detail::draw_share(n_agents, 0.9, gen);
            Rng carstream = gen.substream("car-holdouts");
            for (std::size_t i = 0; i < n_agents; ++i)
                if (!av[i] && carstream.next_double() < 0.9) car[i] = true;
            out.fleet_size = static_cast<int>((n_agents + 29) / 30);
            out.tariff = Tariff{0.50, 0.40, 0.10};
            sav_available = true;
            break;
        }
        case Preset::SAVOriented: {
            car = detail::draw_share(n_agents, 0.6, gen);
            Rng avstream = gen.substream("av-share");
            av = detail::draw_share(n_agents, 0.1, avstream);
            out.fleet_size = static_cast<int>((n_agents + 9) / 10);
            out.tariff = Tariff{0.25, 0.20, 0.05};
            sav_available = true;
            break;
        }
    }

    double total_w = 0;
    for (const auto& c : catalog) total_w += c.weight;

    auto typical = [&](ActivityKind k) {
        for (const auto& a : acts)
            if (a.kind == k) return a.typical_duration_h;
        return 1.0;
    };

    out.agents.reserve(n_agents);
    for (std::size_t i = 0; i < n_agents; ++i) {
        Agent a;
        a.id = "a" + std::to_string(i);
        a.availability.add(Mode::pt);
        a.availability.add(Mode::walk_bike);
        if (car[i]) a.availability.add(Mode::car);
        if (av[i]) a.availability.add(Mode::av);
        if (sav_available) a.availability.add(Mode::sav);

        // chain template by weight
        double pick = gen.next_double() * total_w;
        const ChainTemplate* chosen = &catalog.back();
        for (const auto& c : catalog) {
            if (pick < c.weight) {
                chosen = &c;
                break;
            }
            pick -= c.weight;
        }

        Plan p;
        LinkIndex home_link = detail::draw_location(pools.home, gen);
        Seconds clock = hours(6.75) + gen.next_range(0, hours(2.25));  // first departure
        for (std::size_t j = 0; j < chosen->chain.size(); ++j) {
            ActivityKind kind = activity_kind_from_letter(chosen->chain[j]);
            Activity act;
            act.kind = kind;
            act.location = kind == ActivityKind::Home ? home_link
                                                      : detail::draw_location(pools.pool(kind), gen);
            if (j + 1 == chosen->chain.size()) {
                act.planned_end = kUnbounded;
            } else {
                if (j > 0) {
                    Seconds dwell = hours(typical(kind)) + gen.next_range(-hours(0.25), hours(0.25));
                    clock += std::max<Seconds>(dwell, hours(0.25));
                }
                act.planned_end = clock;
            }
            p.activities.push_back(act);
            if (j + 1 < chosen->chain.size()) p.trips.push_back(Trip{});
        }

        Mode initial = Mode::walk_bike;
        for (Mode m : {Mode::car, Mode::av, Mode::sav, Mode::pt})
            if (a.availability.has(m)) {
                initial = m;
                break;
            }
        for (Trip& t : p.trips) t.mode = initial;
        validate_plan_structure(p);
        a.plans.push_back(std::move(p));
        out.agents.push_back(std::move(a));
    }
    return out;
}

}  // namespace tollsim
