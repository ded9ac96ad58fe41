#include "cloak/observer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <unordered_map>

#include "cloak/error.hpp"
#include "cloak/ts_ops.hpp"

namespace cloak {

namespace {

struct BlockHash {
    std::size_t operator()(const std::vector<StateIdx>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (StateIdx x : v) {
            h ^= x + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

LabelSet merge_block_labels(const TransitionSystem& base, const std::vector<StateIdx>& block,
                            LabelMergePolicy policy, const std::set<std::string>& obsolete_sts) {
    LabelSet out;
    bool n_everywhere = true;
    for (StateIdx m : block) {
        const LabelSet& l = base.labels(m);
        n_everywhere = n_everywhere && has_label(l, kNonSafeLabel);
        for (const std::string& name : l) {
            if (policy == LabelMergePolicy::Intersection && name == kNonSafeLabel)
                continue;
            if (obsolete_sts.count(name))
                continue;
            out.push_back(name);
        }
    }
    if (policy == LabelMergePolicy::Intersection && n_everywhere)
        out.push_back(kNonSafeLabel);
    normalize_labels(out);
    return out;
}

}  // namespace

TransitionSystem observe(const TransitionSystem& ts, const std::set<std::string>& epsilon_events,
                         LabelMergePolicy policy) {
    TransitionSystem erased = replace_with_epsilon(ts, epsilon_events);

    // sts: labels of erased events are obsolete once their endpoints merge.
    std::set<std::string> obsolete;
    for (StateIdx s = 0; s < erased.num_states(); ++s) {
        for (const std::string& l : erased.labels(s)) {
            if (l.rfind(kStsLabelPrefix, 0) != 0)
                continue;
            // label shape: sts:<s|t>:<event>:<state>
            std::string rest = l.substr(std::string(kStsLabelPrefix).size());
            auto cut = rest.find(':');
            if (cut == std::string::npos)
                continue;
            std::string event = rest.substr(cut + 1);
            auto cut2 = event.rfind(':');
            if (cut2 != std::string::npos)
                event = event.substr(0, cut2);
            if (epsilon_events.count(event))
                obsolete.insert(l);
        }
    }

    TsBuilder b("O(" + ts.name() + ")");
    b.copy_events(erased.events());

    std::unordered_map<std::vector<StateIdx>, StateIdx, BlockHash> index;
    std::vector<std::vector<StateIdx>> blocks;
    std::deque<StateIdx> work;

    auto intern = [&](std::vector<StateIdx> block) {
        auto it = index.find(block);
        if (it != index.end())
            return it->second;
        StateIdx s = b.add_unnamed_state(merge_block_labels(erased, block, policy, obsolete));
        index.emplace(block, s);
        blocks.push_back(std::move(block));
        work.push_back(s);
        return s;
    };

    b.mark_initial(intern(epsilon_closure(erased, erased.initial())));

    std::vector<EventIdx> event_order = erased.events().sorted_by_name();
    while (!work.empty()) {
        StateIdx s = work.front();
        work.pop_front();
        std::vector<StateIdx> block = blocks[s];

        for (EventIdx e : event_order) {
            std::vector<StateIdx> next = delta_step(erased, block, e);
            if (!next.empty())
                b.add_transition(s, e, intern(std::move(next)));
        }
        // Every tau edge is kept as a separate deterministic choice.
        std::vector<std::vector<StateIdx>> tau_targets;
        for (StateIdx m : block) {
            for (const Transition& t : erased.out(m)) {
                if (t.event == kTau) {
                    std::vector<StateIdx> one{t.dst};
                    tau_targets.push_back(epsilon_closure(erased, one));
                }
            }
        }
        std::sort(tau_targets.begin(), tau_targets.end());
        tau_targets.erase(std::unique(tau_targets.begin(), tau_targets.end()), tau_targets.end());
        for (std::vector<StateIdx>& next : tau_targets)
            b.add_transition(s, kTau, intern(std::move(next)));
    }

    b.set_observer_provenance(std::make_shared<const TransitionSystem>(ts), std::move(blocks));
    return b.build();
}

bool is_deterministic(const TransitionSystem& ts) {
    if (ts.initial().size() != 1)
        return false;
    for (const Transition& t : ts.transitions())
        if (t.event == kEpsilon)
            return false;
    for (StateIdx s = 0; s < ts.num_states(); ++s) {
        auto row = ts.out(s);
        for (std::size_t i = 1; i < row.size(); ++i) {
            if (row[i].event == row[i - 1].event && row[i].event != kTau &&
                row[i].dst != row[i - 1].dst)
                return false;
        }
    }
    return true;
}

}  // namespace cloak
