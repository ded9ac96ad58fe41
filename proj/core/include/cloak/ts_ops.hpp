#pragma once

#include <set>
#include <vector>

#include "cloak/transition_system.hpp"

namespace cloak {

// R_epsilon(from): every state reachable via zero or more epsilon
// transitions. Result is sorted; always a superset of `from`.
std::vector<StateIdx> epsilon_closure(const TransitionSystem& ts,
                                      std::span<const StateIdx> from);

// Extended transition function over a word of event names. The base case
// maps `from` to its epsilon closure; tau edges are never crossed. An empty
// result means the word is not possible from those states.
std::vector<StateIdx> extended_delta(const TransitionSystem& ts,
                                     std::span<const StateIdx> from,
                                     const std::vector<std::string>& word);

// One step of the subset transition function on an epsilon-closed set.
std::vector<StateIdx> delta_step(const TransitionSystem& ts,
                                 std::span<const StateIdx> closed_from, EventIdx event);

// All words of length <= k possible from the initial states. Intended for
// small systems and test oracles; words are event-name sequences.
std::set<std::vector<std::string>> language_upto(const TransitionSystem& ts, std::size_t k);

// Relabels the given observable events to tau and removes them from the
// alphabet. Hiding an unobservable event is a usage error.
TransitionSystem hide(const TransitionSystem& ts, const std::set<std::string>& events);

// Relabels the given unobservable events to epsilon and removes them from
// the alphabet. Replacing an observable event is a usage error.
TransitionSystem replace_with_epsilon(const TransitionSystem& ts,
                                      const std::set<std::string>& events);

// Keeps only the listed label names (plus, always, the structural sts:
// labels when `keep_sts` is set). Used to project systems down to the
// marking before nonblocking-preserving abstraction.
TransitionSystem project_labels(const TransitionSystem& ts,
                                const std::set<std::string>& keep, bool keep_sts = false);

// Synchronous composition. Shared non-tau events synchronize, private and
// tau/epsilon transitions interleave; only the part reachable from
// I1 x I2 is kept. State identities are flattened tuples. Labels merge per
// policy: Union unions everything, Intersection intersects only "N";
// marking ("M") always intersects.
TransitionSystem compose(const TransitionSystem& a, const TransitionSystem& b,
                         LabelMergePolicy policy = LabelMergePolicy::Union);

// n-ary composition evaluated directly over state tuples; equal to the
// left-associated chain of binary compositions.
TransitionSystem compose_many(const std::vector<const TransitionSystem*>& parts,
                              LabelMergePolicy policy = LabelMergePolicy::Union,
                              const std::string& name = "");

}  // namespace cloak
