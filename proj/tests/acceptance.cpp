// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "toddcount/io.hpp"
#include "toddcount/todd.hpp"
#include "toddcount/verify.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <string>

using namespace toddcount;

namespace {

struct Outcome
{
    bool ok;
    std::string note;
};

Outcome from_suites(std::initializer_list<const char*> names, const SuiteOptions& opt = {})
{
    std::string note;
    bool ok = true;
    for (const char* name : names)
    {
        SuiteResult r = run_suite(name, opt);
        note += (note.empty() ? "" : ", ") + std::string(name) + " " + std::to_string(r.passed()) + "/" +
                std::to_string(r.cases.size());
        if (const CaseRecord* bad = r.first_failure())
        {
            ok = false;
            std::cerr << name << " case " << bad->index << ":\n" << bad->detail << "\n";
        }
    }
    return {ok, note};
}

Outcome projective()
{
    // P^2 and P^3 from the fixture files and their Cartan Gram matrices
    std::string note;
    bool ok = true;
    for (std::size_t n : {2u, 3u})
    {
        std::string dir = TODDCOUNT_FIXTURES;
        Fan f = parse_fan_file(dir + "/p" + std::to_string(n) + ".fan");
        ComplementMap psi = parse_gram_file(dir + "/cartan" + std::to_string(n) + ".gram");
        std::size_t checked = 0;
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            Rational mu = todd_measure(f.cone(i), psi);
            Rational expect = f.dim(i) == 0 ? Rational(1) : f.dim(i) == 1 ? Rational(1, 2) : Rational(1, n + 1);
            if (f.dim(i) == 0 || f.dim(i) == 1 || f.dim(i) == n)
            {
                ++checked;
                if (mu != expect)
                {
                    ok = false;
                    std::cerr << "P" << n << " " << to_string(f.cone(i)) << ": " << to_string(mu) << "\n";
                }
            }
        }
        note += (note.empty() ? "" : ", ") + std::string("P") + std::to_string(n) + " " + std::to_string(checked) +
                " cones";
    }
    Outcome suite = from_suites({"projective"});
    return {ok && suite.ok, note};
}

Outcome normalization()
{
    std::string dir = TODDCOUNT_FIXTURES;
    bool ok = true;
    std::size_t fans = 0;
    for (const char* name : {"p2.fan", "p3.fan", "p1xp1.fan", "hirzebruch2.fan", "weighted112.fan",
                             "singular_pentagon.fan"})
    {
        Fan f = parse_fan_file(dir + "/" + name);
        for (const ComplementMap& psi : {ComplementMap::standard(f.rank()), ComplementMap(cartan_gram(f.rank()))})
        {
            Rational sum = 0;
            for (auto c : f.maximal_cones())
                sum += todd_measure(f.cone(c), psi);
            ++fans;
            if (sum != 1)
            {
                ok = false;
                std::cerr << name << ": sum " << to_string(sum) << "\n";
            }
        }
    }
    Outcome suite = from_suites({"normalization"});
    return {ok && suite.ok, std::to_string(fans) + " fixture fan and map pairs, " + suite.note};
}

} // namespace

int main()
{
    struct Criterion
    {
        const char* name;
        std::function<Outcome()> run;
        double limit_s;
    };
    SuiteOptions counting;
    counting.dims = {1, 2, 3, 4};
    std::vector<Criterion> criteria{
        {"projective space coefficients", projective, 5},
        {"lattice point counting", [&] { return from_suites({"counting"}, counting); }, 120},
        {"resolution independence", [] { return from_suites({"resolution"}); }, 0},
        {"additivity", [] { return from_suites({"additivity"}); }, 0},
        {"flag closed form vs ring walk", [] { return from_suites({"flag-formula"}); }, 0},
        {"presentation relations", [] { return from_suites({"presentation"}); }, 0},
        {"stellar pushforward and projection formula", [] { return from_suites({"stellar", "projection"}); }, 0},
        {"global normalization", normalization, 0},
        {"ehrhart dilations", [] { return from_suites({"ehrhart"}); }, 0},
    };

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const auto& c = criteria[i];
        auto start = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try
        {
            o = c.run();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = c.limit_s == 0 || secs < c.limit_s;
        bool pass = o.ok && in_time;
        all &= pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " " << c.name << " (" << o.note << "; "
                  << static_cast<long>(secs * 1000) << " ms" << (in_time ? "" : ", over time limit") << ")\n";
    }
    return all ? 0 : 1;
}
