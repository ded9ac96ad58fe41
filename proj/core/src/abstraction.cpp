#include "cloak/abstraction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>

#include "cloak/error.hpp"
#include "cloak/ts_ops.hpp"

namespace cloak {

namespace {

using BlockId = std::uint32_t;
using Signature = std::vector<std::pair<EventIdx, BlockId>>;

// States that can follow an infinite tau path inside the given state set:
// greatest fixpoint of "has a tau successor in the set that is itself
// alive". `restrict_to_block` limits edges to the same partition block.
std::vector<bool> divergent_states(const TransitionSystem& ts,
                                   const std::vector<StateIdx>& states,
                                   const std::vector<BlockId>* block_of) {
    std::vector<bool> alive(ts.num_states(), false);
    for (StateIdx s : states)
        alive[s] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateIdx s : states) {
            if (!alive[s])
                continue;
            bool has_successor = false;
            for (const Transition& t : ts.out(s)) {
                if (t.event != kTau || !alive[t.dst])
                    continue;
                if (block_of && (*block_of)[t.dst] != (*block_of)[s])
                    continue;
                has_successor = true;
                break;
            }
            if (!has_successor) {
                alive[s] = false;
                changed = true;
            }
        }
    }
    return alive;
}

struct Refiner {
    const TransitionSystem& ts;
    bool weak;  // weak (tau* saturated) instead of branching/stuttering moves
    std::vector<std::vector<StateIdx>> tau_closure;  // weak mode only
    std::vector<bool> weak_divergent;                // weak mode only

    std::vector<BlockId> block_of;
    std::vector<std::vector<StateIdx>> blocks;

    explicit Refiner(const TransitionSystem& system, bool weak_mode)
        : ts(system), weak(weak_mode) {
        if (weak) {
            tau_closure.resize(ts.num_states());
            for (StateIdx s = 0; s < ts.num_states(); ++s) {
                std::vector<bool> seen(ts.num_states(), false);
                std::deque<StateIdx> work{s};
                seen[s] = true;
                while (!work.empty()) {
                    StateIdx x = work.front();
                    work.pop_front();
                    tau_closure[s].push_back(x);
                    for (const Transition& t : ts.out(x)) {
                        if (t.event == kTau && !seen[t.dst]) {
                            seen[t.dst] = true;
                            work.push_back(t.dst);
                        }
                    }
                }
                std::sort(tau_closure[s].begin(), tau_closure[s].end());
            }
            std::vector<StateIdx> all(ts.num_states());
            for (StateIdx s = 0; s < ts.num_states(); ++s)
                all[s] = s;
            weak_divergent = divergent_states(ts, all, nullptr);
        }
    }

    void init_by_labels() {
        std::map<LabelSet, BlockId> ids;
        block_of.assign(ts.num_states(), 0);
        blocks.clear();
        for (StateIdx s = 0; s < ts.num_states(); ++s) {
            auto [it, fresh] = ids.emplace(ts.labels(s), static_cast<BlockId>(blocks.size()));
            if (fresh)
                blocks.emplace_back();
            block_of[s] = it->second;
            blocks[it->second].push_back(s);
        }
    }

    // Stuttering signature: tau steps inside the current block followed by
    // one visible step (a != tau, or a tau leaving the block).
    Signature branching_signature(StateIdx x, const std::vector<bool>& divergent) const {
        Signature sig;
        std::vector<StateIdx> stack{x};
        std::vector<bool> seen(ts.num_states(), false);
        seen[x] = true;
        while (!stack.empty()) {
            StateIdx y = stack.back();
            stack.pop_back();
            for (const Transition& t : ts.out(y)) {
                if (t.event == kTau && block_of[t.dst] == block_of[x]) {
                    if (!seen[t.dst]) {
                        seen[t.dst] = true;
                        stack.push_back(t.dst);
                    }
                    continue;
                }
                sig.emplace_back(t.event, block_of[t.dst]);
            }
        }
        std::sort(sig.begin(), sig.end());
        sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
        if (divergent[x])
            sig.emplace_back(kEpsilon, 0xFFFFFFFFu);  // divergence flag joins the signature
        return sig;
    }

    Signature weak_signature(StateIdx x) const {
        Signature sig;
        for (StateIdx y : tau_closure[x]) {
            sig.emplace_back(kTau, block_of[y]);
            for (const Transition& t : ts.out(y)) {
                if (t.event == kTau)
                    continue;
                for (StateIdx z : tau_closure[t.dst])
                    sig.emplace_back(t.event, block_of[z]);
            }
        }
        std::sort(sig.begin(), sig.end());
        sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
        if (weak_divergent[x])
            sig.emplace_back(kEpsilon, 0xFFFFFFFFu);
        return sig;
    }

    void run() {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::vector<StateIdx>> next_blocks;
            std::vector<BlockId> next_of(ts.num_states(), 0);
            for (const std::vector<StateIdx>& block : blocks) {
                std::vector<bool> divergent;
                if (!weak)
                    divergent = divergent_states(ts, block, &block_of);
                std::map<Signature, std::vector<StateIdx>> split;
                for (StateIdx s : block)
                    split[weak ? weak_signature(s) : branching_signature(s, divergent)]
                        .push_back(s);
                if (split.size() > 1)
                    changed = true;
                for (auto& [sig, group] : split) {
                    BlockId id = static_cast<BlockId>(next_blocks.size());
                    for (StateIdx s : group)
                        next_of[s] = id;
                    next_blocks.push_back(std::move(group));
                }
            }
            blocks = std::move(next_blocks);
            block_of = std::move(next_of);
        }
    }

    Partition finish() {
        // Canonical order: blocks sorted by minimum member.
        std::sort(blocks.begin(), blocks.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        Partition p;
        p.blocks = std::move(blocks);
        p.block_of.assign(ts.num_states(), 0);
        for (BlockId i = 0; i < p.blocks.size(); ++i)
            for (StateIdx s : p.blocks[i])
                p.block_of[s] = i;
        return p;
    }
};

Partition refine(const TransitionSystem& ts, bool weak) {
    Refiner r(ts, weak);
    r.init_by_labels();
    r.run();
    return r.finish();
}

}  // namespace

Partition vb_partition(const TransitionSystem& ts) {
    return refine(ts, false);
}

TransitionSystem quotient(const TransitionSystem& ts, const Partition& p) {
    if (p.block_of.size() != ts.num_states())
        throw_contract("quotient: partition does not cover the state set");
    std::vector<bool> seen(ts.num_states(), false);
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        const auto& block = p.blocks[i];
        if (block.empty())
            throw_contract("quotient: empty block");
        for (StateIdx s : block) {
            if (s >= ts.num_states() || seen[s] || p.block_of[s] != i)
                throw_contract("quotient: blocks do not partition the state set");
            seen[s] = true;
            if (ts.labels(s) != ts.labels(block.front()))
                throw_contract("quotient: block mixes different state labels");
        }
    }
    for (bool s : seen)
        if (!s)
            throw_contract("quotient: blocks do not cover the state set");

    TsBuilder b(ts.name() + "/~");
    b.copy_events(ts.events());
    for (const auto& block : p.blocks)
        b.add_unnamed_state(ts.labels(block.front()));
    for (StateIdx s : ts.initial())
        b.mark_initial(p.block_of[s]);
    for (const Transition& t : ts.transitions()) {
        if (t.event == kTau && p.block_of[t.src] == p.block_of[t.dst])
            continue;
        b.add_transition(p.block_of[t.src], t.event, p.block_of[t.dst]);
    }
    // Divergence-preserving: a block with an internal tau cycle keeps a tau
    // self-loop.
    for (BlockId i = 0; i < p.blocks.size(); ++i) {
        std::vector<bool> alive = divergent_states(ts, p.blocks[i], &p.block_of);
        for (StateIdx s : p.blocks[i]) {
            if (alive[s]) {
                b.add_transition(i, kTau, i);
                break;
            }
        }
    }
    b.set_quotient_provenance(std::make_shared<const TransitionSystem>(ts), p.blocks);
    return b.build();
}

TransitionSystem vb_abstract(const TransitionSystem& ts,
                             const std::set<std::string>& hide_events) {
    TransitionSystem hidden = hide(ts, hide_events);
    return quotient(hidden, vb_partition(hidden));
}

TransitionSystem nb_abstract(const TransitionSystem& ts,
                             const std::set<std::string>& hide_events) {
    TransitionSystem marked_only = project_labels(ts, {kMarkedLabel});
    TransitionSystem hidden = hide(marked_only, hide_events);
    return quotient(hidden, refine(hidden, true));
}

bool vb_equivalent(const TransitionSystem& a, const TransitionSystem& b) {
    std::set<std::string> ea, eb;
    for (const EventInfo& e : a.events().all())
        ea.insert(e.name);
    for (const EventInfo& e : b.events().all())
        eb.insert(e.name);
    if (ea != eb)
        throw_usage("vb_equivalent: alphabets differ");

    TsBuilder u("vb_eq");
    for (const std::string& name : ea) {
        const EventInfo& info = a.events().info(*a.events().find(name));
        const EventInfo& other = b.events().info(*b.events().find(name));
        if (info.observable != other.observable)
            throw_model("vb_equivalent: event '" + name + "' attributes differ");
        u.add_event(info.name, info.observable, info.controllable);
    }
    auto copy_side = [&](const TransitionSystem& ts) {
        StateIdx offset = static_cast<StateIdx>(u.num_states());
        for (StateIdx s = 0; s < ts.num_states(); ++s)
            u.add_unnamed_state(ts.labels(s));
        for (StateIdx s : ts.initial())
            u.mark_initial(offset + s);
        for (const Transition& t : ts.transitions()) {
            EventIdx e = t.event;
            if (!is_pseudo_event(e))
                e = *u.find_event(ts.events().name(t.event));
            u.add_transition(offset + t.src, e, offset + t.dst);
        }
        return offset;
    };
    copy_side(a);
    StateIdx b_offset = copy_side(b);
    TransitionSystem both = u.build();
    Partition p = vb_partition(both);

    std::set<BlockId> blocks_a, blocks_b;
    for (StateIdx s : a.initial())
        blocks_a.insert(p.block_of[s]);
    for (StateIdx s : b.initial())
        blocks_b.insert(p.block_of[b_offset + s]);
    return blocks_a == blocks_b;
}

}  // namespace cloak
