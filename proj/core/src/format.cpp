#include "cloak/format.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "cloak/error.hpp"

namespace cloak {

std::string to_string(Property p) {
    return p == Property::Cso ? "cso" : "csa";
}

const TransitionSystem* Project::find_member(const std::string& member) const {
    for (const TransitionSystem& ts : members)
        if (ts.name() == member)
            return &ts;
    return nullptr;
}

std::set<std::string> Project::shared_unobservable_events() const {
    std::map<std::string, int> count;
    for (const TransitionSystem& ts : members)
        for (const EventInfo& e : ts.events().all())
            if (!e.observable)
                count[e.name]++;
    std::set<std::string> shared;
    for (const auto& [name, n] : count)
        if (n > 1)
            shared.insert(name);
    return shared;
}

std::set<std::string> Project::local_events(const std::string& member) const {
    std::set<std::string> local;
    const TransitionSystem* own = find_member(member);
    if (!own)
        throw_input("unknown member '" + member + "'");
    for (const EventInfo& e : own->events().all()) {
        bool elsewhere = false;
        for (const TransitionSystem& other : members) {
            if (other.name() != member && other.events().contains(e.name)) {
                elsewhere = true;
                break;
            }
        }
        if (!elsewhere)
            local.insert(e.name);
    }
    return local;
}

void Project::validate() const {
    if (members.empty())
        throw_input("project '" + name + "' has no members");
    std::set<std::string> names;
    for (const TransitionSystem& ts : members)
        if (!names.insert(ts.name()).second)
            throw_input("duplicate member name '" + ts.name() + "'");
    std::map<std::string, EventInfo> attrs;
    for (const TransitionSystem& ts : members) {
        for (const EventInfo& e : ts.events().all()) {
            auto it = attrs.find(e.name);
            if (it == attrs.end())
                attrs.emplace(e.name, e);
            else if (!(it->second == e))
                throw_model("event '" + e.name + "' has conflicting attributes across members");
        }
    }
    for (const auto& [member, states] : spec.secrets) {
        const TransitionSystem* ts = find_member(member);
        if (!ts)
            throw_input("secret set references unknown member '" + member + "'");
        for (const std::string& s : states)
            if (!ts->find_state(s))
                throw_input("secret state '" + s + "' not in member '" + member + "'");
    }
    if (spec.property == Property::Csa && !spec.secrets.empty())
        throw_input("CSA projects carry no secret sets");
    for (const std::string& e : uncontrollable)
        if (!attrs.count(e))
            throw_input("uncontrollable override references unknown event '" + e + "'");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

}  // namespace

TransitionSystem parse_automaton(std::istream& in, const std::string& source_name) {
    std::unique_ptr<TsBuilder> builder;
    struct PendingTrans {
        std::string src, event, dst;
        int line;
    };
    std::vector<PendingTrans> pending;
    std::string line;
    int line_no = 0;

    auto fail = [&](const std::string& msg) {
        throw_input(source_name + ":" + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::vector<std::string> tok = split_ws(line);
        if (tok.empty())
            continue;
        const std::string& kw = tok[0];
        if (kw == "system") {
            if (tok.size() != 2)
                fail("expected: system <name>");
            if (builder)
                fail("duplicate 'system' line");
            builder = std::make_unique<TsBuilder>(tok[1]);
        } else if (!builder) {
            fail("'system' line must come first");
        } else if (kw == "event") {
            if (tok.size() != 4)
                fail("expected: event <name> obs|unobs ctrl|unctrl");
            bool obs, ctrl;
            if (tok[2] == "obs")
                obs = true;
            else if (tok[2] == "unobs")
                obs = false;
            else {
                fail("expected obs|unobs, got '" + tok[2] + "'");
                return {};
            }
            if (tok[3] == "ctrl")
                ctrl = true;
            else if (tok[3] == "unctrl")
                ctrl = false;
            else {
                fail("expected ctrl|unctrl, got '" + tok[3] + "'");
                return {};
            }
            builder->add_event(tok[1], obs, ctrl);
        } else if (kw == "state") {
            if (tok.size() < 2)
                fail("expected: state <name> [flags]");
            LabelSet labels;
            bool init = false;
            for (std::size_t i = 2; i < tok.size(); ++i) {
                if (tok[i] == "init")
                    init = true;
                else if (tok[i] == "marked")
                    labels.push_back(kMarkedLabel);
                else if (tok[i] == "secret")
                    labels.push_back(kSecretLabel);
                else if (tok[i].rfind("label:", 0) == 0)
                    labels.push_back(tok[i].substr(6));
                else
                    fail("unknown state flag '" + tok[i] + "'");
            }
            StateIdx s = builder->add_state(tok[1], std::move(labels));
            if (init)
                builder->mark_initial(s);
        } else if (kw == "trans") {
            if (tok.size() != 4)
                fail("expected: trans <src> <event> <dst>");
            pending.push_back(PendingTrans{tok[1], tok[2], tok[3], line_no});
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    if (!builder)
        throw_input(source_name + ": missing 'system' line");
    for (const PendingTrans& t : pending) {
        line_no = t.line;
        try {
            builder->add_transition(t.src, t.event, t.dst);
        } catch (const Error& e) {
            fail(e.what());
        }
    }
    try {
        return builder->build();
    } catch (const Error& e) {
        throw_input(source_name + ": " + e.what());
    }
}

TransitionSystem parse_automaton_string(const std::string& text, const std::string& source_name) {
    std::istringstream in(text);
    return parse_automaton(in, source_name);
}

TransitionSystem load_automaton(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw_input("cannot open '" + path.string() + "'");
    return parse_automaton(in, path.string());
}

void print_automaton(std::ostream& out, const TransitionSystem& ts) {
    out << "system " << ts.name() << "\n";
    for (EventIdx e : ts.events().sorted_by_name()) {
        const EventInfo& info = ts.events().info(e);
        out << "event " << info.name << (info.observable ? " obs" : " unobs")
            << (info.controllable ? " ctrl" : " unctrl") << "\n";
    }
    for (StateIdx s = 0; s < ts.num_states(); ++s) {
        out << "state " << ts.state_name(s);
        if (ts.is_initial(s))
            out << " init";
        for (const std::string& l : ts.labels(s)) {
            if (l == kMarkedLabel)
                out << " marked";
            else if (l == kSecretLabel)
                out << " secret";
            else
                out << " label:" << l;
        }
        out << "\n";
    }
    // Transitions sorted by (source, event name, target) for stable diffs.
    std::vector<const Transition*> order;
    order.reserve(ts.transitions().size());
    for (const Transition& t : ts.transitions())
        order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [&](const Transition* a, const Transition* b) {
        if (a->src != b->src)
            return a->src < b->src;
        const std::string& ea = ts.events().name(a->event);
        const std::string& eb = ts.events().name(b->event);
        if (ea != eb)
            return ea < eb;
        return a->dst < b->dst;
    });
    for (const Transition* t : order) {
        out << "trans " << ts.state_name(t->src) << " " << ts.events().name(t->event) << " "
            << ts.state_name(t->dst) << "\n";
    }
}

std::string automaton_to_string(const TransitionSystem& ts) {
    std::ostringstream out;
    print_automaton(out, ts);
    return out.str();
}

void save_automaton(const std::filesystem::path& path, const TransitionSystem& ts) {
    std::ofstream out(path);
    if (!out)
        throw_input("cannot write '" + path.string() + "'");
    print_automaton(out, ts);
}

Project parse_project(std::istream& in, const std::string& source_name,
                      const std::filesystem::path& base_dir) {
    Project project;
    bool have_name = false;
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw_input(source_name + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::vector<std::string> tok = split_ws(line);
        if (tok.empty())
            continue;
        if (tok[0] == "project") {
            if (tok.size() != 2)
                fail("expected: project <name>");
            project.name = tok[1];
            have_name = true;
        } else if (tok[0] == "module") {
            if (tok.size() != 2)
                fail("expected: module <file>");
            project.members.push_back(load_automaton(base_dir / tok[1]));
        } else if (tok[0] == "property") {
            if (tok.size() != 2 || (tok[1] != "cso" && tok[1] != "csa"))
                fail("expected: property cso|csa");
            project.spec.property = tok[1] == "cso" ? Property::Cso : Property::Csa;
        } else if (tok[0] == "uncontrollable") {
            for (std::size_t i = 1; i < tok.size(); ++i)
                project.uncontrollable.insert(tok[i]);
        } else {
            fail("unknown keyword '" + tok[0] + "'");
        }
    }
    if (!have_name)
        throw_input(source_name + ": missing 'project' line");

    // Secret sets come from the members' secret flags.
    if (project.spec.property == Property::Cso) {
        for (const TransitionSystem& ts : project.members) {
            std::set<std::string> secret;
            for (StateIdx s = 0; s < ts.num_states(); ++s)
                if (has_label(ts.labels(s), kSecretLabel))
                    secret.insert(ts.state_name(s));
            if (!secret.empty())
                project.spec.secrets.emplace(ts.name(), std::move(secret));
        }
    }
    project.validate();
    return project;
}

Project load_project(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw_input("cannot open '" + path.string() + "'");
    return parse_project(in, path.string(), path.parent_path());
}

void save_project(const std::filesystem::path& dir, const Project& project) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / (project.name + ".proj"));
    if (!out)
        throw_input("cannot write project file in '" + dir.string() + "'");
    out << "project " << project.name << "\n";
    for (const TransitionSystem& ts : project.members) {
        std::string file = ts.name() + ".aut";
        save_automaton(dir / file, ts);
        out << "module " << file << "\n";
    }
    out << "property " << to_string(project.spec.property) << "\n";
    if (!project.uncontrollable.empty()) {
        out << "uncontrollable";
        for (const std::string& e : project.uncontrollable)
            out << " " << e;
        out << "\n";
    }
}

}  // namespace cloak
