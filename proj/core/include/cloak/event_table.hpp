#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cloak {

using EventIdx = std::uint32_t;

// Structural pseudo-events. epsilon marks erased local unobservable events,
// tau marks hidden local observable events. Neither belongs to an alphabet.
constexpr EventIdx kEpsilon = 0xFFFFFFFFu;
constexpr EventIdx kTau = 0xFFFFFFFEu;

inline bool is_pseudo_event(EventIdx e) { return e >= kTau; }

inline const char* kEpsilonName = "epsilon";
inline const char* kTauName = "tau";

struct EventInfo {
    std::string name;
    bool observable = true;
    bool controllable = true;

    bool operator==(const EventInfo&) const = default;
};

// Event-attributed alphabet of one transition system. Pseudo-events are
// rejected as entries; they live only on transitions.
class EventTable {
public:
    EventIdx add(const std::string& name, bool observable, bool controllable);

    std::optional<EventIdx> find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name).has_value(); }

    const EventInfo& info(EventIdx e) const { return events_.at(e); }
    const std::string& name(EventIdx e) const;

    std::size_t size() const { return events_.size(); }
    const std::vector<EventInfo>& all() const { return events_; }

    // Deterministic iteration order for exploration and printing.
    std::vector<EventIdx> sorted_by_name() const;

    bool operator==(const EventTable& other) const { return events_ == other.events_; }

private:
    std::vector<EventInfo> events_;
    std::map<std::string, EventIdx> by_name_;
};

}  // namespace cloak
