#include "cloak/ts_ops.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "cloak/error.hpp"

namespace cloak {

namespace {

// Transitions of one state with a given event; out(s) is sorted by
// (event, dst), so this is an equal_range.
std::span<const Transition> successors(const TransitionSystem& ts, StateIdx s, EventIdx e) {
    auto row = ts.out(s);
    const Transition lo{s, e, 0};
    const Transition hi{s, e, 0xFFFFFFFFu};
    auto begin = std::lower_bound(row.begin(), row.end(), lo);
    auto end = std::upper_bound(row.begin(), row.end(), hi);
    return {&*begin, static_cast<std::size_t>(end - begin)};
}

void validate_subset(const TransitionSystem& ts, std::span<const StateIdx> from) {
    for (StateIdx s : from)
        if (s >= ts.num_states())
            throw_input("state index " + std::to_string(s) + " not in system '" + ts.name() + "'");
}

struct VectorHash {
    std::size_t operator()(const std::vector<StateIdx>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (StateIdx x : v) {
            h ^= x + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace

std::vector<StateIdx> epsilon_closure(const TransitionSystem& ts,
                                      std::span<const StateIdx> from) {
    validate_subset(ts, from);
    std::vector<bool> seen(ts.num_states(), false);
    std::deque<StateIdx> work;
    for (StateIdx s : from) {
        if (!seen[s]) {
            seen[s] = true;
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        StateIdx s = work.front();
        work.pop_front();
        for (const Transition& t : successors(ts, s, kEpsilon)) {
            if (!seen[t.dst]) {
                seen[t.dst] = true;
                work.push_back(t.dst);
            }
        }
    }
    std::vector<StateIdx> out;
    for (StateIdx s = 0; s < ts.num_states(); ++s)
        if (seen[s])
            out.push_back(s);
    return out;
}

std::vector<StateIdx> delta_step(const TransitionSystem& ts,
                                 std::span<const StateIdx> closed_from, EventIdx event) {
    std::vector<StateIdx> targets;
    for (StateIdx s : closed_from)
        for (const Transition& t : successors(ts, s, event))
            targets.push_back(t.dst);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (targets.empty())
        return targets;
    return epsilon_closure(ts, targets);
}

std::vector<StateIdx> extended_delta(const TransitionSystem& ts,
                                     std::span<const StateIdx> from,
                                     const std::vector<std::string>& word) {
    validate_subset(ts, from);
    std::vector<StateIdx> current = epsilon_closure(ts, from);
    for (const std::string& w : word) {
        if (w == kEpsilonName || w == kTauName)
            throw_input("words must not contain '" + w + "'");
        auto e = ts.events().find(w);
        if (!e)
            throw_input("unknown event '" + w + "' in system '" + ts.name() + "'");
        current = delta_step(ts, current, *e);
        if (current.empty())
            return current;
    }
    return current;
}

namespace {

void enumerate_words(const TransitionSystem& ts, const std::vector<StateIdx>& closed,
                     std::vector<std::string>& word, std::size_t k,
                     const std::vector<EventIdx>& event_order,
                     std::set<std::vector<std::string>>& out) {
    out.insert(word);
    if (word.size() >= k)
        return;
    for (EventIdx e : event_order) {
        auto next = delta_step(ts, closed, e);
        if (next.empty())
            continue;
        word.push_back(ts.events().name(e));
        enumerate_words(ts, next, word, k, event_order, out);
        word.pop_back();
    }
}

}  // namespace

std::set<std::vector<std::string>> language_upto(const TransitionSystem& ts, std::size_t k) {
    std::set<std::vector<std::string>> out;
    std::vector<StateIdx> closed = epsilon_closure(ts, ts.initial());
    std::vector<std::string> word;
    enumerate_words(ts, closed, word, k, ts.events().sorted_by_name(), out);
    return out;
}

namespace {

TransitionSystem relabel_events(const TransitionSystem& ts, const std::set<std::string>& events,
                                EventIdx pseudo, bool require_observable, const char* op) {
    std::vector<bool> remove(ts.events().size(), false);
    for (const std::string& name : events) {
        auto e = ts.events().find(name);
        if (!e)
            throw_input(std::string(op) + ": unknown event '" + name + "' in system '" +
                        ts.name() + "'");
        const EventInfo& info = ts.events().info(*e);
        if (require_observable && !info.observable)
            throw_usage(std::string(op) + ": event '" + name + "' is unobservable");
        if (!require_observable && info.observable)
            throw_usage(std::string(op) + ": event '" + name + "' is observable");
        remove[*e] = true;
    }

    TsBuilder b(ts.name());
    std::vector<EventIdx> map(ts.events().size());
    for (EventIdx e = 0; e < ts.events().size(); ++e) {
        const EventInfo& info = ts.events().info(e);
        map[e] = remove[e] ? pseudo : b.add_event(info.name, info.observable, info.controllable);
    }
    for (StateIdx s = 0; s < ts.num_states(); ++s)
        b.add_unnamed_state(ts.labels(s));
    for (StateIdx s : ts.initial())
        b.mark_initial(s);
    for (const Transition& t : ts.transitions())
        b.add_transition(t.src, is_pseudo_event(t.event) ? t.event : map[t.event], t.dst);
    b.copy_shape_from(ts);
    return b.build();
}

}  // namespace

TransitionSystem hide(const TransitionSystem& ts, const std::set<std::string>& events) {
    return relabel_events(ts, events, kTau, true, "hide");
}

TransitionSystem replace_with_epsilon(const TransitionSystem& ts,
                                      const std::set<std::string>& events) {
    return relabel_events(ts, events, kEpsilon, false, "replace_with_epsilon");
}

TransitionSystem project_labels(const TransitionSystem& ts, const std::set<std::string>& keep,
                                bool keep_sts) {
    TsBuilder b(ts.name());
    b.copy_events(ts.events());
    for (StateIdx s = 0; s < ts.num_states(); ++s) {
        LabelSet kept;
        for (const std::string& l : ts.labels(s)) {
            if (keep.count(l) || (keep_sts && l.rfind(kStsLabelPrefix, 0) == 0))
                kept.push_back(l);
        }
        b.add_unnamed_state(std::move(kept));
    }
    for (StateIdx s : ts.initial())
        b.mark_initial(s);
    for (const Transition& t : ts.transitions())
        b.add_transition(t.src, t.event, t.dst);
    b.copy_shape_from(ts);
    return b.build();
}

namespace {

LabelSet merge_state_labels(LabelMergePolicy policy,
                            const std::vector<const TransitionSystem*>& parts,
                            const std::vector<StateIdx>& tuple, bool any_marking) {
    LabelSet out;
    bool all_marked = true;
    bool n_everywhere = true;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const LabelSet& l = parts[i]->labels(tuple[i]);
        all_marked = all_marked && parts[i]->marked(tuple[i]);
        n_everywhere = n_everywhere && has_label(l, kNonSafeLabel);
        for (const std::string& name : l) {
            if (name == kMarkedLabel)
                continue;
            if (policy == LabelMergePolicy::Intersection && name == kNonSafeLabel)
                continue;
            out.push_back(name);
        }
    }
    if (any_marking && all_marked)
        out.push_back(kMarkedLabel);
    if (policy == LabelMergePolicy::Intersection && n_everywhere)
        out.push_back(kNonSafeLabel);
    normalize_labels(out);
    return out;
}

}  // namespace

TransitionSystem compose_many(const std::vector<const TransitionSystem*>& parts,
                              LabelMergePolicy policy, const std::string& name) {
    if (parts.empty())
        throw_input("compose: no operands");

    // Shared events must agree on their attributes.
    std::map<std::string, EventInfo> by_name;
    for (const TransitionSystem* p : parts) {
        for (const EventInfo& e : p->events().all()) {
            auto it = by_name.find(e.name);
            if (it == by_name.end()) {
                by_name.emplace(e.name, e);
            } else if (it->second.observable != e.observable) {
                throw_model("compose: event '" + e.name +
                            "' is observable in one operand and unobservable in another");
            } else if (it->second.controllable != e.controllable) {
                throw_model("compose: event '" + e.name +
                            "' is controllable in one operand and uncontrollable in another");
            }
        }
    }

    std::string out_name = name;
    if (out_name.empty()) {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i)
                out_name += "||";
            out_name += parts[i]->name();
        }
    }
    TsBuilder b(out_name);
    for (const auto& [n, info] : by_name)
        b.add_event(n, info.observable, info.controllable);

    const std::size_t np = parts.size();
    constexpr EventIdx kNoEvent = 0xFFFFFFFFu;
    std::vector<std::vector<EventIdx>> union_to_local(np);
    std::vector<std::vector<std::size_t>> participants(by_name.size());
    for (std::size_t i = 0; i < np; ++i) {
        union_to_local[i].assign(by_name.size(), kNoEvent);
        for (EventIdx e = 0; e < parts[i]->events().size(); ++e) {
            EventIdx u = *b.find_event(parts[i]->events().name(e));
            union_to_local[i][u] = e;
            participants[u].push_back(i);
        }
    }

    bool any_marking = false;
    for (const TransitionSystem* p : parts)
        any_marking = any_marking || p->has_marking();

    std::unordered_map<std::vector<StateIdx>, StateIdx, VectorHash> index;
    std::vector<std::vector<StateIdx>> tuples;
    std::deque<StateIdx> work;

    auto intern = [&](const std::vector<StateIdx>& tuple) {
        auto it = index.find(tuple);
        if (it != index.end())
            return it->second;
        StateIdx s = b.add_unnamed_state(merge_state_labels(policy, parts, tuple, any_marking));
        index.emplace(tuple, s);
        tuples.push_back(tuple);
        work.push_back(s);
        return s;
    };

    // Initial tuples in lexicographic order of component initial states.
    {
        std::vector<StateIdx> tuple(np);
        std::vector<std::size_t> pos(np, 0);
        bool done = false;
        while (!done) {
            for (std::size_t i = 0; i < np; ++i)
                tuple[i] = parts[i]->initial()[pos[i]];
            b.mark_initial(intern(tuple));
            done = true;
            std::size_t i = np;
            while (i > 0) {
                --i;
                if (++pos[i] < parts[i]->initial().size()) {
                    done = false;
                    break;
                }
                pos[i] = 0;
            }
        }
    }

    std::vector<std::span<const Transition>> moves(np);
    while (!work.empty()) {
        StateIdx s = work.front();
        work.pop_front();
        std::vector<StateIdx> tuple = tuples[s];  // copy: tuples may reallocate

        // Synchronized / private alphabet events.
        for (EventIdx u = 0; u < participants.size(); ++u) {
            const auto& who = participants[u];
            bool enabled = true;
            for (std::size_t k = 0; k < who.size() && enabled; ++k) {
                std::size_t i = who[k];
                moves[k] = successors(*parts[i], tuple[i], union_to_local[i][u]);
                enabled = !moves[k].empty();
            }
            if (!enabled)
                continue;
            // Cross product of participant successors.
            std::vector<std::size_t> pick(who.size(), 0);
            while (true) {
                std::vector<StateIdx> next = tuple;
                for (std::size_t k = 0; k < who.size(); ++k)
                    next[who[k]] = moves[k][pick[k]].dst;
                b.add_transition(s, u, intern(next));
                std::size_t k = who.size();
                bool carry = true;
                while (k > 0 && carry) {
                    --k;
                    if (++pick[k] < moves[k].size())
                        carry = false;
                    else
                        pick[k] = 0;
                }
                if (carry)
                    break;
            }
        }

        // tau and epsilon interleave per component.
        for (EventIdx pseudo : {kTau, kEpsilon}) {
            for (std::size_t i = 0; i < np; ++i) {
                for (const Transition& t : successors(*parts[i], tuple[i], pseudo)) {
                    std::vector<StateIdx> next = tuple;
                    next[i] = t.dst;
                    b.add_transition(s, pseudo, intern(next));
                }
            }
        }
    }

    // Product provenance, splicing factors of operands that are themselves
    // products so n-ary composition yields flat tuples.
    std::vector<std::shared_ptr<const TransitionSystem>> factors;
    std::vector<std::size_t> factor_offset(np);
    for (std::size_t i = 0; i < np; ++i) {
        factor_offset[i] = factors.size();
        if (parts[i]->provenance() == Provenance::Product) {
            auto sub = parts[i]->factors();
            factors.insert(factors.end(), sub.begin(), sub.end());
        } else {
            factors.push_back(std::make_shared<const TransitionSystem>(*parts[i]));
        }
    }
    std::vector<std::vector<StateIdx>> factor_states(tuples.size());
    for (std::size_t s = 0; s < tuples.size(); ++s) {
        std::vector<StateIdx> flat;
        flat.reserve(factors.size());
        for (std::size_t i = 0; i < np; ++i) {
            if (parts[i]->provenance() == Provenance::Product) {
                auto sub = parts[i]->factor_state(tuples[s][i]);
                flat.insert(flat.end(), sub.begin(), sub.end());
            } else {
                flat.push_back(tuples[s][i]);
            }
        }
        factor_states[s] = std::move(flat);
    }
    b.set_product_provenance(std::move(factors), std::move(factor_states));
    return b.build();
}

TransitionSystem compose(const TransitionSystem& a, const TransitionSystem& b,
                         LabelMergePolicy policy) {
    return compose_many({&a, &b}, policy);
}

}  // namespace cloak
