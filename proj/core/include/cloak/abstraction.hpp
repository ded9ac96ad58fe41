#pragma once

#include <set>
#include <vector>

#include "cloak/transition_system.hpp"

namespace cloak {

// Disjoint blocks covering the state set. Blocks are sorted internally and
// ordered by their minimum member, so partitions compare deterministically.
struct Partition {
    std::vector<std::vector<StateIdx>> blocks;
    std::vector<std::uint32_t> block_of;

    std::size_t size() const { return blocks.size(); }
};

// Coarsest divergence-sensitive visible bisimulation partition: starts from
// the state-label partition and splits by stuttering event-target-block
// signatures until fixpoint.
Partition vb_partition(const TransitionSystem& ts);

// Quotient transition system for a label-uniform partition. Invisible tau
// transitions inside a block are dropped, except that a block containing a
// tau cycle keeps a tau self-loop so divergence survives the quotient.
TransitionSystem quotient(const TransitionSystem& ts, const Partition& p);

// hide + vb_partition + quotient.
TransitionSystem vb_abstract(const TransitionSystem& ts, const std::set<std::string>& hide_events);

// Conservative nonblocking-preserving abstraction: divergence-sensitive
// weak bisimulation with the marking as the only preserved label. Strips
// all other labels from the result.
TransitionSystem nb_abstract(const TransitionSystem& ts, const std::set<std::string>& hide_events);

// Whether the initial states of a and b fall into matching blocks of the
// visible-bisimulation partition of their disjoint union. Both systems must
// have the same alphabet.
bool vb_equivalent(const TransitionSystem& a, const TransitionSystem& b);

}  // namespace cloak
