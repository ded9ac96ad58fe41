#pragma once

#include <set>

#include "cloak/transition_system.hpp"

namespace cloak {

// Subset construction. `epsilon_events` (unobservable events, local in the
// enclosing project) are erased first; the remaining alphabet, including
// unobservable events that are still shared, survives as transition labels
// (a partial observer). Block labels merge per policy (Union unions all,
// Intersection intersects "N" and unions the rest). tau edges pass through
// one at a time, mapping a source block to the closure of the edge target.
// Obsolete sts: labels of the erased events are stripped from the result.
TransitionSystem observe(const TransitionSystem& ts, const std::set<std::string>& epsilon_events,
                         LabelMergePolicy policy = LabelMergePolicy::Union);

// True iff there is one initial state, no epsilon transitions, and no state
// has two differently-targeted transitions with the same alphabet event.
// Multiple tau choices do not count as nondeterminism.
bool is_deterministic(const TransitionSystem& ts);

}  // namespace cloak
