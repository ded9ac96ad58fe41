#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cloak/event_table.hpp"

namespace cloak {

using StateIdx = std::uint32_t;

struct Transition {
    StateIdx src;
    EventIdx event;
    StateIdx dst;

    auto operator<=>(const Transition&) const = default;
};

// Atomic-proposition names attached to a state; kept sorted and
// duplicate-free so label sets compare cheaply.
using LabelSet = std::vector<std::string>;

// Reserved label names. "M" composes by intersection (a composed state is
// marked only when every operand state is), "N" follows the merge policy,
// everything else unions.
inline const char* kMarkedLabel = "M";
inline const char* kSecretLabel = "S";
inline const char* kNonSafeLabel = "N";

// Prefix of the temporary source/target labels used by the shared
// unobservable pipeline; never part of user-facing results.
inline const char* kStsLabelPrefix = "sts:";

bool has_label(const LabelSet& labels, const std::string& name);
LabelSet with_label(LabelSet labels, const std::string& name);
LabelSet without_label(LabelSet labels, const std::string& name);
void normalize_labels(LabelSet& labels);

// Numeric-aware ordering used for canonical member lists and file output:
// all-digit names compare as integers, everything else lexicographically.
bool natural_less(const std::string& a, const std::string& b);

enum class LabelMergePolicy { Union, Intersection };

// How the states of a derived system relate to the system it was built
// from. Observer and Quotient states carry member lists into their base;
// Product states carry one component state per factor.
enum class Provenance { None, Observer, Quotient, Product };

class TsBuilder;

class TransitionSystem {
public:
    TransitionSystem() = default;

    const std::string& name() const { return name_; }
    std::size_t num_states() const { return labels_.size(); }
    const EventTable& events() const { return events_; }
    std::span<const StateIdx> initial() const { return initial_; }
    std::span<const Transition> transitions() const { return transitions_; }
    const LabelSet& labels(StateIdx s) const { return labels_.at(s); }

    // Transitions leaving s, contiguous because transitions_ is sorted.
    std::span<const Transition> out(StateIdx s) const;

    // Display name; synthesized from provenance when not stored.
    std::string state_name(StateIdx s) const;
    std::optional<StateIdx> find_state(const std::string& name) const;

    Provenance provenance() const { return provenance_; }
    const TransitionSystem& base() const;
    const std::shared_ptr<const TransitionSystem>& base_ptr() const { return base_; }
    std::span<const StateIdx> members(StateIdx s) const;
    std::span<const std::shared_ptr<const TransitionSystem>> factors() const { return factors_; }
    std::span<const StateIdx> factor_state(StateIdx s) const;

    // Base-state identities flattened through nested observer/quotient
    // constructions; sorted by natural_less, duplicate-free.
    std::vector<std::string> flattened_members(StateIdx s) const;

    bool is_initial(StateIdx s) const;

    // Marking. A system without any explicit "M" label carries no marking
    // information and every state counts as (implicitly) marked.
    bool has_marking() const { return has_marking_; }
    bool marked(StateIdx s) const;

    // Shape equality on names, labels, events, initial states and
    // transitions; provenance is ignored.
    bool structurally_equal(const TransitionSystem& other) const;

private:
    friend class TsBuilder;

    std::string name_;
    EventTable events_;
    std::vector<std::string> state_names_;  // empty when names are derived
    std::vector<LabelSet> labels_;
    std::vector<StateIdx> initial_;
    std::vector<Transition> transitions_;
    std::vector<std::uint32_t> row_offsets_;  // CSR over transitions_
    bool has_marking_ = false;

    Provenance provenance_ = Provenance::None;
    std::shared_ptr<const TransitionSystem> base_;
    std::vector<std::vector<StateIdx>> members_;
    std::vector<std::shared_ptr<const TransitionSystem>> factors_;
    std::vector<std::vector<StateIdx>> factor_states_;
};

// Assembles a validated, effectively-immutable TransitionSystem.
class TsBuilder {
public:
    explicit TsBuilder(std::string name) : name_(std::move(name)) {}

    EventIdx add_event(const std::string& name, bool observable, bool controllable);
    void copy_events(const EventTable& table);
    std::optional<EventIdx> find_event(const std::string& name) const { return events_.find(name); }
    const EventTable& events() const { return events_; }

    StateIdx add_state(std::string name, LabelSet labels = {});
    StateIdx add_unnamed_state(LabelSet labels = {});
    std::size_t num_states() const { return labels_.size(); }
    void set_labels(StateIdx s, LabelSet labels);
    void add_label(StateIdx s, const std::string& label);
    const LabelSet& labels(StateIdx s) const { return labels_.at(s); }

    void mark_initial(StateIdx s);
    void add_transition(StateIdx src, EventIdx event, StateIdx dst);
    // Convenience for tests and generators: looks up states/events by name;
    // "tau" and "epsilon" denote the pseudo-events.
    void add_transition(const std::string& src, const std::string& event, const std::string& dst);

    // Copies stored state names and provenance from a system with the same
    // state space; used by operations that only relabel transitions or edit
    // labels.
    void copy_shape_from(const TransitionSystem& ts);

    void set_observer_provenance(std::shared_ptr<const TransitionSystem> base,
                                 std::vector<std::vector<StateIdx>> members);
    void set_quotient_provenance(std::shared_ptr<const TransitionSystem> base,
                                 std::vector<std::vector<StateIdx>> members);
    void set_product_provenance(std::vector<std::shared_ptr<const TransitionSystem>> factors,
                                std::vector<std::vector<StateIdx>> factor_states);

    TransitionSystem build();

private:
    StateIdx state_by_name(const std::string& name) const;

    std::string name_;
    EventTable events_;
    std::vector<std::string> state_names_;
    std::vector<LabelSet> labels_;
    std::vector<StateIdx> initial_;
    std::vector<Transition> transitions_;
    Provenance provenance_ = Provenance::None;
    std::shared_ptr<const TransitionSystem> base_;
    std::vector<std::vector<StateIdx>> members_;
    std::vector<std::shared_ptr<const TransitionSystem>> factors_;
    std::vector<std::vector<StateIdx>> factor_states_;
    std::map<std::string, StateIdx> by_name_;
};

}  // namespace cloak
