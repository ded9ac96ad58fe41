#include "cloak/transition_system.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cloak/error.hpp"

namespace cloak {

EventIdx EventTable::add(const std::string& name, bool observable, bool controllable) {
    if (name.empty())
        throw_input("event name must not be empty");
    if (name == kEpsilonName || name == kTauName)
        throw_input("'" + name + "' is reserved and cannot be declared as an event");
    if (name.find_first_of(" \t\r\n") != std::string::npos)
        throw_input("event name '" + name + "' contains whitespace");
    auto it = by_name_.find(name);
    if (it != by_name_.end()) {
        const EventInfo& have = events_[it->second];
        if (have.observable != observable || have.controllable != controllable)
            throw_input("event '" + name + "' redeclared with different attributes");
        return it->second;
    }
    EventIdx idx = static_cast<EventIdx>(events_.size());
    events_.push_back(EventInfo{name, observable, controllable});
    by_name_.emplace(name, idx);
    return idx;
}

std::optional<EventIdx> EventTable::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end())
        return std::nullopt;
    return it->second;
}

const std::string& EventTable::name(EventIdx e) const {
    static const std::string eps = kEpsilonName;
    static const std::string tau = kTauName;
    if (e == kEpsilon)
        return eps;
    if (e == kTau)
        return tau;
    return events_.at(e).name;
}

std::vector<EventIdx> EventTable::sorted_by_name() const {
    std::vector<EventIdx> order(events_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<EventIdx>(i);
    std::sort(order.begin(), order.end(), [&](EventIdx a, EventIdx b) {
        return events_[a].name < events_[b].name;
    });
    return order;
}

bool has_label(const LabelSet& labels, const std::string& name) {
    return std::binary_search(labels.begin(), labels.end(), name);
}

LabelSet with_label(LabelSet labels, const std::string& name) {
    auto it = std::lower_bound(labels.begin(), labels.end(), name);
    if (it == labels.end() || *it != name)
        labels.insert(it, name);
    return labels;
}

LabelSet without_label(LabelSet labels, const std::string& name) {
    auto it = std::lower_bound(labels.begin(), labels.end(), name);
    if (it != labels.end() && *it == name)
        labels.erase(it);
    return labels;
}

void normalize_labels(LabelSet& labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
}

bool natural_less(const std::string& a, const std::string& b) {
    auto all_digits = [](const std::string& s) {
        if (s.empty())
            return false;
        return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    bool na = all_digits(a), nb = all_digits(b);
    if (na && nb) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    }
    if (na != nb)
        return na;  // numbers before symbolic names
    return a < b;
}

std::span<const Transition> TransitionSystem::out(StateIdx s) const {
    if (s >= num_states())
        throw_input("state index out of range");
    auto begin = transitions_.begin() + row_offsets_[s];
    auto end = transitions_.begin() + row_offsets_[s + 1];
    return {&*begin, static_cast<std::size_t>(end - begin)};
}

const TransitionSystem& TransitionSystem::base() const {
    if (!base_)
        throw_usage("system '" + name_ + "' has no base system");
    return *base_;
}

std::span<const StateIdx> TransitionSystem::members(StateIdx s) const {
    if (provenance_ != Provenance::Observer && provenance_ != Provenance::Quotient)
        throw_usage("system '" + name_ + "' has no block members");
    return members_.at(s);
}

std::span<const StateIdx> TransitionSystem::factor_state(StateIdx s) const {
    if (provenance_ != Provenance::Product)
        throw_usage("system '" + name_ + "' is not a product");
    return factor_states_.at(s);
}

std::string TransitionSystem::state_name(StateIdx s) const {
    if (!state_names_.empty())
        return state_names_.at(s);
    switch (provenance_) {
    case Provenance::Observer:
    case Provenance::Quotient: {
        std::vector<std::string> parts = flattened_members(s);
        std::string out = "{";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i)
                out += ",";
            out += parts[i];
        }
        out += "}";
        return out;
    }
    case Provenance::Product: {
        std::string out = "(";
        const auto& comp = factor_states_.at(s);
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (i)
                out += ",";
            out += factors_[i]->state_name(comp[i]);
        }
        out += ")";
        return out;
    }
    case Provenance::None:
        break;
    }
    return "s" + std::to_string(s);
}

std::optional<StateIdx> TransitionSystem::find_state(const std::string& name) const {
    if (!state_names_.empty()) {
        for (StateIdx s = 0; s < num_states(); ++s)
            if (state_names_[s] == name)
                return s;
        return std::nullopt;
    }
    for (StateIdx s = 0; s < num_states(); ++s)
        if (state_name(s) == name)
            return s;
    return std::nullopt;
}

std::vector<std::string> TransitionSystem::flattened_members(StateIdx s) const {
    std::vector<std::string> out;
    if (provenance_ == Provenance::Observer || provenance_ == Provenance::Quotient) {
        for (StateIdx m : members_.at(s)) {
            auto sub = base_->flattened_members(m);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        std::sort(out.begin(), out.end(), natural_less);
        out.erase(std::unique(out.begin(), out.end()), out.end());
    } else {
        out.push_back(state_name(s));
    }
    return out;
}

bool TransitionSystem::is_initial(StateIdx s) const {
    return std::binary_search(initial_.begin(), initial_.end(), s);
}

bool TransitionSystem::marked(StateIdx s) const {
    if (!has_marking_)
        return true;
    return has_label(labels_.at(s), kMarkedLabel);
}

bool TransitionSystem::structurally_equal(const TransitionSystem& other) const {
    if (num_states() != other.num_states() || !(events_ == other.events_) ||
        initial_ != other.initial_ || transitions_ != other.transitions_)
        return false;
    for (StateIdx s = 0; s < num_states(); ++s) {
        if (labels_[s] != other.labels_[s])
            return false;
        if (state_name(s) != other.state_name(s))
            return false;
    }
    return true;
}

EventIdx TsBuilder::add_event(const std::string& name, bool observable, bool controllable) {
    return events_.add(name, observable, controllable);
}

void TsBuilder::copy_events(const EventTable& table) {
    for (const EventInfo& e : table.all())
        events_.add(e.name, e.observable, e.controllable);
}

StateIdx TsBuilder::add_state(std::string name, LabelSet labels) {
    if (name.empty())
        throw_input("state name must not be empty");
    if (name.find_first_of(" \t\r\n") != std::string::npos)
        throw_input("state name '" + name + "' contains whitespace");
    if (by_name_.count(name))
        throw_input("duplicate state name '" + name + "' in system '" + name_ + "'");
    normalize_labels(labels);
    StateIdx idx = static_cast<StateIdx>(labels_.size());
    by_name_.emplace(name, idx);
    state_names_.push_back(std::move(name));
    labels_.push_back(std::move(labels));
    return idx;
}

StateIdx TsBuilder::add_unnamed_state(LabelSet labels) {
    if (!state_names_.empty())
        throw_contract("cannot mix named and unnamed states");
    normalize_labels(labels);
    StateIdx idx = static_cast<StateIdx>(labels_.size());
    labels_.push_back(std::move(labels));
    return idx;
}

void TsBuilder::set_labels(StateIdx s, LabelSet labels) {
    normalize_labels(labels);
    labels_.at(s) = std::move(labels);
}

void TsBuilder::add_label(StateIdx s, const std::string& label) {
    labels_.at(s) = with_label(std::move(labels_.at(s)), label);
}

void TsBuilder::mark_initial(StateIdx s) {
    if (s >= labels_.size())
        throw_input("initial state index out of range");
    initial_.push_back(s);
}

void TsBuilder::add_transition(StateIdx src, EventIdx event, StateIdx dst) {
    if (src >= labels_.size() || dst >= labels_.size())
        throw_input("transition endpoint out of range");
    if (!is_pseudo_event(event) && event >= events_.size())
        throw_input("transition event out of range");
    transitions_.push_back(Transition{src, event, dst});
}

void TsBuilder::add_transition(const std::string& src, const std::string& event,
                               const std::string& dst) {
    EventIdx e;
    if (event == kEpsilonName) {
        e = kEpsilon;
    } else if (event == kTauName) {
        e = kTau;
    } else {
        auto found = events_.find(event);
        if (!found)
            throw_input("unknown event '" + event + "' in system '" + name_ + "'");
        e = *found;
    }
    add_transition(state_by_name(src), e, state_by_name(dst));
}

StateIdx TsBuilder::state_by_name(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end())
        throw_input("unknown state '" + name + "' in system '" + name_ + "'");
    return it->second;
}

void TsBuilder::copy_shape_from(const TransitionSystem& ts) {
    if (ts.num_states() != labels_.size())
        throw_contract("copy_shape_from: state spaces differ");
    state_names_ = ts.state_names_;
    provenance_ = ts.provenance_;
    base_ = ts.base_;
    members_ = ts.members_;
    factors_ = ts.factors_;
    factor_states_ = ts.factor_states_;
}

void TsBuilder::set_observer_provenance(std::shared_ptr<const TransitionSystem> base,
                                        std::vector<std::vector<StateIdx>> members) {
    provenance_ = Provenance::Observer;
    base_ = std::move(base);
    members_ = std::move(members);
}

void TsBuilder::set_quotient_provenance(std::shared_ptr<const TransitionSystem> base,
                                        std::vector<std::vector<StateIdx>> members) {
    provenance_ = Provenance::Quotient;
    base_ = std::move(base);
    members_ = std::move(members);
}

void TsBuilder::set_product_provenance(std::vector<std::shared_ptr<const TransitionSystem>> factors,
                                       std::vector<std::vector<StateIdx>> factor_states) {
    provenance_ = Provenance::Product;
    factors_ = std::move(factors);
    factor_states_ = std::move(factor_states);
}

TransitionSystem TsBuilder::build() {
    if (labels_.empty())
        throw_input("system '" + name_ + "' has no states");
    std::sort(initial_.begin(), initial_.end());
    initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
    if (initial_.empty())
        throw_input("system '" + name_ + "' has no initial state");
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());

    TransitionSystem ts;
    ts.name_ = std::move(name_);
    ts.events_ = std::move(events_);
    ts.state_names_ = std::move(state_names_);
    ts.labels_ = std::move(labels_);
    ts.initial_ = std::move(initial_);
    ts.transitions_ = std::move(transitions_);
    ts.provenance_ = provenance_;
    ts.base_ = std::move(base_);
    ts.members_ = std::move(members_);
    ts.factors_ = std::move(factors_);
    ts.factor_states_ = std::move(factor_states_);

    ts.row_offsets_.assign(ts.labels_.size() + 1, 0);
    for (const Transition& t : ts.transitions_)
        ts.row_offsets_[t.src + 1]++;
    for (std::size_t i = 1; i < ts.row_offsets_.size(); ++i)
        ts.row_offsets_[i] += ts.row_offsets_[i - 1];

    ts.has_marking_ = false;
    for (const LabelSet& l : ts.labels_) {
        if (has_label(l, kMarkedLabel)) {
            ts.has_marking_ = true;
            break;
        }
    }
    return ts;
}

}  // namespace cloak
