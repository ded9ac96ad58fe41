// Scratch driver used while bringing the model up; verifies the benchmark
// sizes against the expected reachable extended-observer counts.
#include <chrono>
#include <iostream>

#include "cloak/building.hpp"
#include "cloak/observer.hpp"
#include "cloak/security.hpp"
#include "cloak/ts_ops.hpp"

using namespace cloak;

namespace {

struct Counts {
    std::size_t states, transitions;
};

Counts extended_counts(const Project& project, Property property) {
    std::vector<TransitionSystem> extended;
    int i = 0;
    for (const TransitionSystem& member : project.members) {
        ++i;
        std::set<std::string> eps;
        for (const EventInfo& e : member.events().all())
            if (!e.observable)
                eps.insert(e.name);
        TransitionSystem obs = observe(member, eps);
        std::set<std::string> secret;
        auto it = project.spec.secrets.find(member.name());
        if (it != project.spec.secrets.end())
            secret = it->second;
        obs = property == Property::Cso ? mark_non_safe_cso(obs, secret)
                                        : mark_non_safe_csa(obs);
        std::string w = property == Property::Cso ? "w" + std::to_string(i) : "w";
        extended.push_back(extend_observer(obs, w));
    }
    std::vector<const TransitionSystem*> parts;
    for (const TransitionSystem& ts : extended)
        parts.push_back(&ts);
    TransitionSystem all = compose_many(parts);
    auto nb = nonblocking(all);
    std::cout << "  nonblocking=" << nb.nonblocking << " trace=";
    for (const auto& e : nb.trace)
        std::cout << e << " ";
    std::cout << "\n";
    return Counts{all.num_states(), all.transitions().size()};
}

void check(const std::string& name, Counts got, std::size_t x, std::size_t t) {
    bool ok = got.states == x && got.transitions == t;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": got (" << got.states << ","
              << got.transitions << ") want (" << x << "," << t << ")\n";
}

BuildingSpec spec_t2(int n, int m) {
    BuildingSpec s;
    s.floors = n;
    s.elevators = m;
    if (n == 1 && m == 1)
        s.secrets[1] = {"1"};
    if (n == 1 && m == 3)
        s.secrets[1] = {"1", "2", "3"};
    if (n == 2) {
        s.secrets[1] = {"3"};
        s.secrets[2] = {"1", "5"};
    }
    if (n == 3) {
        s.secrets[1] = {"1"};
        s.secrets[2] = {"1", "3"};
        s.secrets[3] = {"1", "5"};
    }
    return s;
}

}  // namespace

int main() {
    {
        TransitionSystem f = gen_floor(1, 2);
        std::cout << "floor(1,2): " << f.num_states() << " states, "
                  << f.transitions().size() << " transitions (want 6,10)\n";
        TransitionSystem of = observe(f, {});
        std::cout << "O(floor): " << of.num_states() << " states (want 10)\n";
    }

    auto run = [&](const char* name, BuildingSpec s, std::size_t x, std::size_t t) {
        auto start = std::chrono::steady_clock::now();
        Project p = gen_building(s);
        check(name, extended_counts(p, Property::Cso), x, t);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cout << "  (" << ms << " ms)\n";
    };

    run("T2(1,1)", spec_t2(1, 1), 7, 11);
    run("T2(1,3)", spec_t2(1, 3), 19, 39);
    run("T2(2,2)", spec_t2(2, 2), 775, 2913);
    run("T2(2,3)", spec_t2(2, 3), 3823, 14567);
    run("T2(3,3)", spec_t2(3, 3), 347445, 1732836);

    auto t3 = [&](int n, int m, std::set<std::string> disable, std::size_t x, std::size_t t) {
        BuildingSpec s = spec_t2(n, m);
        s.disabled = std::move(disable);
        std::string name = "T3(" + std::to_string(n) + "," + std::to_string(m) + ")";
        run(name.c_str(), s, x, t);
    };
    t3(1, 1, {"c1_1"}, 2, 2);
    t3(1, 3, {"c1_1"}, 12, 24);
    t3(2, 2, {"e2_1"}, 487, 2014);
    t3(2, 3, {"c2_3"}, 1699, 6450);
    t3(3, 3, {"c2_1", "c3_3"}, 75520, 380508);
    {
        BuildingSpec s;
        s.floors = 3;
        s.elevators = 4;
        s.secrets[1] = {"1"};
        s.secrets[2] = {"1", "3"};
        s.secrets[3] = {"5", "7"};
        s.disabled = {"c2_1", "c3_3"};
        run("T3(3,4)", s, 591867, 3042099);
    }
    return 0;
}
