#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cloak/project.hpp"
#include "cloak/transition_system.hpp"

namespace cloak {

enum class Verdict { Opaque, NotOpaque, Anonymous, NotAnonymous };

std::string to_string(Verdict v);
bool verdict_holds(Verdict v);

// CSO non-safe marking: label N on every observer state whose members all
// lie in `secret` (base-state names). Derived from the block membership,
// never from merged label sets.
TransitionSystem mark_non_safe_cso(const TransitionSystem& obs,
                                   const std::set<std::string>& secret);

// Variant taking the secret set from the "S" labels of the observer's base
// system; for observers over composed bases a tuple state is secret when
// any component is (the base's composition already unions "S").
TransitionSystem mark_non_safe_cso(const TransitionSystem& obs);

// CSA non-safe marking: label N on every singleton observer state. When the
// base states carry N themselves (nested constructions), a block is non-safe
// only if its single member is.
TransitionSystem mark_non_safe_csa(const TransitionSystem& obs);

// Prop.-4-style shortcut on local observers (valid only when no shared
// unobservable events remain, i.e. no observer retains unobservable
// events). CSO: no local N state anywhere -> Opaque. CSA: some subsystem
// without any N state -> Anonymous. Otherwise undecided.
std::optional<Verdict> local_verdict_shortcut(const std::vector<const TransitionSystem*>& local_obs,
                                              Property property);

// Two-state detector: marked state with self-loops on the observer's
// alphabet and a w-transition to an unmarked, blocking state.
TransitionSystem make_detector(const std::string& name, const EventTable& alphabet,
                               const std::string& w_event);

// Extended observer: w self-loops at the N states, composed with the
// detector. Every formerly non-safe state gains a w edge to a fresh
// blocking state; all original states become marked. w is observable and
// uncontrollable, and must not collide with the alphabet.
TransitionSystem extend_observer(const TransitionSystem& obs_with_n, const std::string& w_event);

struct NonblockingResult {
    bool nonblocking = true;
    // Shortest event trace to a blocking state (empty when nonblocking).
    std::vector<std::string> trace;
};

// True iff every reachable state can reach a marked state. Systems without
// marking information count as all-marked.
NonblockingResult nonblocking(const TransitionSystem& ts);

}  // namespace cloak
