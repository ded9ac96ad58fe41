#include "cloak/security.hpp"

#include <algorithm>
#include <deque>

#include "cloak/error.hpp"
#include "cloak/observer.hpp"
#include "cloak/ts_ops.hpp"

namespace cloak {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Opaque:
        return "OPAQUE";
    case Verdict::NotOpaque:
        return "NOT_OPAQUE";
    case Verdict::Anonymous:
        return "ANONYMOUS";
    case Verdict::NotAnonymous:
        return "NOT_ANONYMOUS";
    }
    return "?";
}

bool verdict_holds(Verdict v) {
    return v == Verdict::Opaque || v == Verdict::Anonymous;
}

namespace {

TransitionSystem relabel_states(const TransitionSystem& ts,
                                const std::vector<LabelSet>& labels) {
    TsBuilder b(ts.name());
    b.copy_events(ts.events());
    for (StateIdx s = 0; s < ts.num_states(); ++s)
        b.add_unnamed_state(labels[s]);
    for (StateIdx s : ts.initial())
        b.mark_initial(s);
    for (const Transition& t : ts.transitions())
        b.add_transition(t.src, t.event, t.dst);
    b.copy_shape_from(ts);
    return b.build();
}

void require_observer(const TransitionSystem& obs, const char* op) {
    if (obs.provenance() != Provenance::Observer)
        throw_usage(std::string(op) + ": states are not observer blocks");
}

}  // namespace

TransitionSystem mark_non_safe_cso(const TransitionSystem& obs,
                                   const std::set<std::string>& secret) {
    require_observer(obs, "mark_non_safe_cso");
    const TransitionSystem& base = obs.base();
    std::vector<bool> is_secret(base.num_states(), false);
    std::set<std::string> seen;
    for (StateIdx s = 0; s < base.num_states(); ++s) {
        if (secret.count(base.state_name(s))) {
            is_secret[s] = true;
            seen.insert(base.state_name(s));
        }
    }
    if (seen.size() != secret.size()) {
        for (const std::string& name : secret)
            if (!seen.count(name))
                throw_input("secret state '" + name + "' not in base system '" + base.name() + "'");
    }
    std::vector<LabelSet> labels;
    labels.reserve(obs.num_states());
    for (StateIdx s = 0; s < obs.num_states(); ++s) {
        bool all_secret = true;
        for (StateIdx m : obs.members(s))
            all_secret = all_secret && is_secret[m];
        LabelSet l = without_label(obs.labels(s), kNonSafeLabel);
        if (all_secret)
            l = with_label(std::move(l), kNonSafeLabel);
        labels.push_back(std::move(l));
    }
    return relabel_states(obs, labels);
}

TransitionSystem mark_non_safe_cso(const TransitionSystem& obs) {
    require_observer(obs, "mark_non_safe_cso");
    const TransitionSystem& base = obs.base();
    std::set<std::string> secret;
    for (StateIdx s = 0; s < base.num_states(); ++s)
        if (has_label(base.labels(s), kSecretLabel))
            secret.insert(base.state_name(s));
    return mark_non_safe_cso(obs, secret);
}

namespace {

// Whether a state stands for exactly one base state of the original
// systems. Raw states are singletons of themselves, tuples are pinned when
// all components are, and blocks built by earlier observer/quotient steps
// carry the verdict as their N label.
bool pinned_estimate(const TransitionSystem& ts, StateIdx s) {
    switch (ts.provenance()) {
    case Provenance::None:
        return true;
    case Provenance::Product: {
        auto comp = ts.factor_state(s);
        auto factors = ts.factors();
        for (std::size_t i = 0; i < comp.size(); ++i)
            if (!pinned_estimate(*factors[i], comp[i]))
                return false;
        return true;
    }
    case Provenance::Observer:
    case Provenance::Quotient:
        return has_label(ts.labels(s), kNonSafeLabel);
    }
    return false;
}

}  // namespace

TransitionSystem mark_non_safe_csa(const TransitionSystem& obs) {
    require_observer(obs, "mark_non_safe_csa");
    const TransitionSystem& base = obs.base();
    std::vector<LabelSet> labels;
    labels.reserve(obs.num_states());
    for (StateIdx s = 0; s < obs.num_states(); ++s) {
        auto members = obs.members(s);
        bool pinned = members.size() == 1 && pinned_estimate(base, members[0]);
        LabelSet l = without_label(obs.labels(s), kNonSafeLabel);
        if (pinned)
            l = with_label(std::move(l), kNonSafeLabel);
        labels.push_back(std::move(l));
    }
    return relabel_states(obs, labels);
}

std::optional<Verdict> local_verdict_shortcut(const std::vector<const TransitionSystem*>& local_obs,
                                              Property property) {
    if (local_obs.empty())
        throw_input("local_verdict_shortcut: no observers");
    for (const TransitionSystem* obs : local_obs)
        for (const EventInfo& e : obs->events().all())
            if (!e.observable)
                throw_usage("local_verdict_shortcut: observer retains unobservable event '" +
                            e.name + "' (shared unobservable events present)");
    if (property == Property::Cso) {
        for (const TransitionSystem* obs : local_obs)
            for (StateIdx s = 0; s < obs->num_states(); ++s)
                if (has_label(obs->labels(s), kNonSafeLabel))
                    return std::nullopt;
        return Verdict::Opaque;
    }
    for (const TransitionSystem* obs : local_obs) {
        bool any_n = false;
        for (StateIdx s = 0; s < obs->num_states(); ++s)
            any_n = any_n || has_label(obs->labels(s), kNonSafeLabel);
        if (!any_n)
            return Verdict::Anonymous;
    }
    return std::nullopt;
}

TransitionSystem make_detector(const std::string& name, const EventTable& alphabet,
                               const std::string& w_event) {
    TsBuilder b(name);
    for (const EventInfo& e : alphabet.all())
        b.add_event(e.name, e.observable, e.controllable);
    EventIdx w = b.add_event(w_event, true, false);
    StateIdx idle = b.add_state("0", {kMarkedLabel});
    StateIdx tripped = b.add_state("1");
    b.mark_initial(idle);
    for (const EventInfo& e : alphabet.all())
        b.add_transition(idle, *b.find_event(e.name), idle);
    b.add_transition(idle, w, tripped);
    return b.build();
}

TransitionSystem extend_observer(const TransitionSystem& obs_with_n, const std::string& w_event) {
    if (!is_deterministic(obs_with_n))
        throw_usage("extend_observer: observer must be deterministic");
    if (obs_with_n.events().contains(w_event))
        throw_input("extend_observer: '" + w_event + "' collides with the alphabet");

    TsBuilder b(obs_with_n.name());
    b.copy_events(obs_with_n.events());
    EventIdx w = b.add_event(w_event, true, false);
    for (StateIdx s = 0; s < obs_with_n.num_states(); ++s)
        b.add_unnamed_state(obs_with_n.labels(s));
    for (StateIdx s : obs_with_n.initial())
        b.mark_initial(s);
    for (const Transition& t : obs_with_n.transitions())
        b.add_transition(t.src, t.event, t.dst);
    for (StateIdx s = 0; s < obs_with_n.num_states(); ++s)
        if (has_label(obs_with_n.labels(s), kNonSafeLabel))
            b.add_transition(s, w, s);
    b.copy_shape_from(obs_with_n);
    TransitionSystem looped = b.build();

    TransitionSystem detector =
        make_detector(obs_with_n.name() + "_d", obs_with_n.events(), w_event);
    return compose(looped, detector);
}

NonblockingResult nonblocking(const TransitionSystem& ts) {
    const std::size_t n = ts.num_states();

    // Reachable set.
    std::vector<bool> reachable(n, false);
    std::deque<StateIdx> work;
    for (StateIdx s : ts.initial()) {
        reachable[s] = true;
        work.push_back(s);
    }
    while (!work.empty()) {
        StateIdx s = work.front();
        work.pop_front();
        for (const Transition& t : ts.out(s)) {
            if (!reachable[t.dst]) {
                reachable[t.dst] = true;
                work.push_back(t.dst);
            }
        }
    }

    // Coreachable set via reversed edges.
    std::vector<std::vector<StateIdx>> preds(n);
    for (const Transition& t : ts.transitions())
        preds[t.dst].push_back(t.src);
    std::vector<bool> coreachable(n, false);
    for (StateIdx s = 0; s < n; ++s) {
        if (ts.marked(s)) {
            coreachable[s] = true;
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        StateIdx s = work.front();
        work.pop_front();
        for (StateIdx p : preds[s]) {
            if (!coreachable[p]) {
                coreachable[p] = true;
                work.push_back(p);
            }
        }
    }

    NonblockingResult result;
    std::vector<bool> blocking(n, false);
    bool any = false;
    for (StateIdx s = 0; s < n; ++s) {
        blocking[s] = reachable[s] && !coreachable[s];
        any = any || blocking[s];
    }
    if (!any)
        return result;
    result.nonblocking = false;

    // Shortest trace to a blocking state; BFS with event-name-sorted
    // exploration makes the trace deterministic.
    std::vector<std::pair<StateIdx, EventIdx>> parent(n, {0, 0});
    std::vector<int> dist(n, -1);
    for (StateIdx s : ts.initial()) {
        dist[s] = 0;
        work.push_back(s);
    }
    std::optional<StateIdx> hit;
    for (StateIdx s : ts.initial())
        if (blocking[s])
            hit = s;
    while (!work.empty() && !hit) {
        StateIdx s = work.front();
        work.pop_front();
        std::vector<Transition> row(ts.out(s).begin(), ts.out(s).end());
        std::stable_sort(row.begin(), row.end(), [&](const Transition& a, const Transition& c) {
            return ts.events().name(a.event) < ts.events().name(c.event);
        });
        for (const Transition& t : row) {
            if (dist[t.dst] != -1)
                continue;
            dist[t.dst] = dist[s] + 1;
            parent[t.dst] = {s, t.event};
            if (blocking[t.dst]) {
                hit = t.dst;
                break;
            }
            work.push_back(t.dst);
        }
    }
    std::vector<std::string> trace;
    StateIdx at = *hit;
    while (dist[at] > 0) {
        auto [p, e] = parent[at];
        trace.push_back(ts.events().name(e));
        at = p;
    }
    std::reverse(trace.begin(), trace.end());
    result.trace = std::move(trace);
    return result;
}

}  // namespace cloak
