#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cloak/transition_system.hpp"

namespace cloak {

enum class Property { Cso, Csa };

std::string to_string(Property p);

// Security specification of a project. CSO carries per-subsystem secret
// state sets (state names); CSA carries none.
struct SecuritySpec {
    Property property = Property::Cso;
    std::map<std::string, std::set<std::string>> secrets;
};

// A named collection of subsystems composed by synchronization, plus the
// security property to verify or enforce.
struct Project {
    std::string name;
    std::vector<TransitionSystem> members;
    SecuritySpec spec;
    std::set<std::string> uncontrollable;  // overrides applied on top of the files

    const TransitionSystem* find_member(const std::string& name) const;

    // Unobservable events appearing in more than one member.
    std::set<std::string> shared_unobservable_events() const;
    // Events appearing in exactly one member.
    std::set<std::string> local_events(const std::string& member) const;

    // Checks member-name uniqueness, event-attribute consistency across
    // members, and that secrets and overrides resolve.
    void validate() const;
};

}  // namespace cloak
