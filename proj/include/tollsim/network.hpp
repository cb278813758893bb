#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tollsim/text.hpp"
#include "tollsim/units.hpp"

namespace tollsim {

using NodeIndex = std::uint32_t;
using LinkIndex = std::uint32_t;
inline constexpr LinkIndex kNoLink = static_cast<LinkIndex>(-1);

struct NetworkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Node {
    std::string id;
    double x = 0;  // meters
    double y = 0;
};

struct Link {
    std::string id;
    NodeIndex from = 0;
    NodeIndex to = 0;
    double length_m = 0;
    double free_speed_ms = 0;
    double flow_capacity_vph = 0;  // for a 100%-conventional stream
    int lanes = 1;
    int storage_capacity = 1;  // vehicles, derived at build time

    double free_flow_time_s() const { return length_m / free_speed_ms; }
    double length_miles() const { return meters_to_miles(length_m); }
};

// Effective vehicle length used for storage"; one queued vehicle occupies
// 7.5 m of lane.
inline constexpr double kEffectiveVehicleLength = 7.5;

// Share of conventional flow capacity one AV consumes when exiting a link.
inline constexpr double kDefaultAvCapacityFactor = 0.666;

// Blended maximum flow for a stream with AV share s: capacity / (1 - s + s*c).
inline double effective_flow_capacity(double base_capacity_vph, double s, double c) {
    if (s < 0.0 || s > 1.0) throw NetworkError("AV share out of [0,1]");
    if (c <= 0.0 || c > 1.0) throw NetworkError("capacity parameter out of (0,1]");
    return base_capacity_vph / (1.0 - s + s * c);
}

inline double effective_flow_capacity(const Link& link, double s, double c) {
    return effective_flow_capacity(link.flow_capacity_vph, s, c);
}

// One 5-minute measurement cell of the fundamental diagram for a link.
struct FlowObservation {
    LinkIndex link = 0;
    Seconds start = 0;
    Seconds end = 0;
    double density_veh_km = 0;   // time-mean occupancy / length
    double outflow_vph = 0;      // exits scaled to veh/h
    int entries = 0;             // vehicles entering during the interval
    double av_share = 0;         // AV+SAV fraction of entries, in [0,1]

    double interval_hours() const { return seconds_to_hours(static_cast<double>(end - start)); }
};

// Average speed q/k in m/s; an empty link (k = 0) moves at free speed.
inline double average_speed_ms(const FlowObservation& obs, const Link& link) {
    if (obs.density_veh_km < 0 || obs.outflow_vph < 0)
        throw NetworkError("negative flow observation");
    if (obs.density_veh_km == 0) return link.free_speed_ms;
    return kmh_to_mps(obs.outflow_vph / obs.density_veh_km);
}

// Delay accumulated on the link across two consecutive intervals, in
// vehicle-hours. Nonzero only when speed drops; capped at n * dt (no vehicle
// loses more than the whole interval).
inline double link_delay_veh_h(const FlowObservation& at, const FlowObservation& next,
                               const Link& link) {
    if (at.link != next.link) throw NetworkError("link_delay: observations from different links");
    const double u_now = average_speed_ms(at, link);
    const double u_next = average_speed_ms(next, link);
    if (u_next >= u_now) return 0.0;
    const double dt_h = at.interval_hours();
    const double l_km = link.length_m / 1000.0;
    const double u_now_kmh = mps_to_kmh(u_now);
    const double u_next_kmh = std::max(mps_to_kmh(u_next), 1e-9);
    double d = (l_km / u_next_kmh - l_km / u_now_kmh) * static_cast<double>(at.entries);
    return std::clamp(d, 0.0, static_cast<double>(at.entries) * dt_h);
}

// Additional link users across two consecutive intervals; nonzero only when
// both outflow and speed decrease.
inline double additional_users(const FlowObservation& at, const FlowObservation& next,
                               const Link& link) {
    const double u_now = average_speed_ms(at, link);
    const double u_next = average_speed_ms(next, link);
    if (next.outflow_vph >= at.outflow_vph || u_next >= u_now) return 0.0;
    return (at.outflow_vph - next.outflow_vph) * at.interval_hours();
}

class Network {
  public:
    Network(std::vector<Node> nodes, std::vector<Link> links)
        : nodes_(std::move(nodes)), links_(std::move(links)) {
        if (links_.empty()) throw NetworkError("no links");
        for (NodeIndex i = 0; i < nodes_.size(); ++i) {
            if (!std::isfinite(nodes_[i].x) || !std::isfinite(nodes_[i].y))
                throw NetworkError("non-finite coordinates on node " + nodes_[i].id);
            if (!node_index_.emplace(nodes_[i].id, i).second)
                throw NetworkError("duplicate node id " + nodes_[i].id);
        }
        out_links_.resize(nodes_.size());
        in_links_.resize(nodes_.size());
        for (LinkIndex i = 0; i < links_.size(); ++i) {
            Link& l = links_[i];
            if (l.length_m <= 0 || l.free_speed_ms <= 0 || l.flow_capacity_vph <= 0 || l.lanes <= 0)
                throw NetworkError("non-positive attribute on link " + l.id);
            if (l.from >= nodes_.size() || l.to >= nodes_.size())
                throw NetworkError("dangling node reference on link " + l.id);
            if (!link_index_.emplace(l.id, i).second)
                throw NetworkError("duplicate link id " + l.id);
            l.storage_capacity = std::max(
                1, static_cast<int>(std::floor(l.lanes * l.length_m / kEffectiveVehicleLength)));
            out_links_[l.from].push_back(i);
            in_links_[l.to].push_back(i);
        }
    }

    static Network from_ids(std::vector<Node> nodes,
                            const std::vector<std::tuple<std::string, std::string, std::string,
                                                         double, double, double, int>>& link_rows) {
        std::map<std::string, NodeIndex> idx;
        for (NodeIndex i = 0; i < nodes.size(); ++i) idx.emplace(nodes[i].id, i);
        std::vector<Link> links;
        links.reserve(link_rows.size());
        for (const auto& [id, from, to, len, speed, cap, lanes] : link_rows) {
            auto f = idx.find(from);
            auto t = idx.find(to);
            if (f == idx.end() || t == idx.end())
                throw NetworkError("link " + id + " references unknown node");
            links.push_back(Link{id, f->second, t->second, len, speed, cap, lanes, 1});
        }
        return Network(std::move(nodes), std::move(links));
    }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_links() const { return links_.size(); }
    const Node& node(NodeIndex i) const { return nodes_[i]; }
    const Link& link(LinkIndex i) const { return links_[i]; }
    const std::vector<Link>& links() const { return links_; }
    const std::vector<LinkIndex>& out_links(NodeIndex n) const { return out_links_[n]; }
    const std::vector<LinkIndex>& in_links(NodeIndex n) const { return in_links_[n]; }

    NodeIndex node_index(const std::string& id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end()) throw NetworkError("unknown node id " + id);
        return it->second;
    }
    LinkIndex link_index(const std::string& id) const {
        auto it = link_index_.find(id);
        if (it == link_index_.end()) throw NetworkError("unknown link id " + id);
        return it->second;
    }
    bool has_link(const std::string& id) const { return link_index_.count(id) > 0; }

    double beeline_m(LinkIndex a, LinkIndex b) const {
        // trip anchors are link downstream nodes
        const Node& na = nodes_[links_[a].to];
        const Node& nb = nodes_[links_[b].to];
        return std::hypot(na.x - nb.x, na.y - nb.y);
    }

  private:
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::map<std::string, NodeIndex> node_index_;
    std::map<std::string, LinkIndex> link_index_;
    std::vector<std::vector<LinkIndex>> out_links_;
    std::vector<std::vector<LinkIndex>> in_links_;
};

// --- network file format -----------------------------------------------
//
// Comma-delimited, one record per line after a header:
//   # tollsim network v1
//   node,<id>,<x>,<y>
//   link,<id>,<from>,<to>,<length_m>,<freespeed_ms>,<capacity_vph>,<lanes>

inline std::string serialize_network(const Network& net) {
    std::ostringstream out;
    out << "# tollsim network v1\n";
    for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
        const Node& n = net.node(i);
        out << "node," << n.id << ',' << n.x << ',' << n.y << '\n';
    }
    for (LinkIndex i = 0; i < net.num_links(); ++i) {
        const Link& l = net.link(i);
        out << "link," << l.id << ',' << net.node(l.from).id << ',' << net.node(l.to).id << ','
            << l.length_m << ',' << l.free_speed_ms << ',' << l.flow_capacity_vph << ','
            << l.lanes << '\n';
    }
    return out.str();
}

inline Network parse_network(const std::vector<std::string>& lines) {
    std::vector<Node> nodes;
    std::vector<std::tuple<std::string, std::string, std::string, double, double, double, int>> links;
    for (const std::string& raw : lines) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto f = split(line, ',');
        if (f[0] == "node") {
            if (f.size() != 4) throw ParseError("node record needs 4 fields: " + raw);
            nodes.push_back(Node{f[1], parse_double(f[2], "x"), parse_double(f[3], "y")});
        } else if (f[0] == "link") {
            if (f.size() != 8) throw ParseError("link record needs 8 fields: " + raw);
            links.emplace_back(f[1], f[2], f[3], parse_double(f[4], "length_m"),
                               parse_double(f[5], "freespeed_ms"),
                               parse_double(f[6], "capacity_vph"),
                               static_cast<int>(parse_int(f[7], "lanes")));
        } else {
            throw ParseError("unknown record type '" + f[0] + "'");
        }
    }
    return Network::from_ids(std::move(nodes), links);
}

inline Network load_network(const std::string& path) { return parse_network(read_lines(path)); }

inline void save_network(const Network& net, const std::string& path) {
    write_text(path, serialize_network(net));
}

}  // namespace tollsim
