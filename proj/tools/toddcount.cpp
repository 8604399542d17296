// toddcount: Todd measures of cones, lattice point counts of polytopes,
// resolutions of fans and the verification battery.

#include "toddcount/errors.hpp"
#include "toddcount/io.hpp"
#include "toddcount/todd.hpp"
#include "toddcount/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>

using namespace toddcount;
using json = nlohmann::json;

namespace {

enum Exit
{
    ok = 0,
    usage = 2,
    domain = 3,
    verification = 4,
};

struct MapOptions
{
    std::string gram, flag;
    bool standard = false;
};

ComplementMap load_map(const MapOptions& m, std::size_t rank)
{
    ComplementMap psi = ComplementMap::standard(rank);
    if (!m.gram.empty())
        psi = parse_gram_file(m.gram);
    else if (!m.flag.empty())
        psi = parse_flag_file(m.flag);
    if (psi.rank() != rank)
        throw ParseError(0, "complement map has rank " + std::to_string(psi.rank()) + ", input has rank " +
                                std::to_string(rank));
    return psi;
}

json vec_json(const IntVector& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(x.str());
    return a;
}

Fan load_fan(const std::string& path)
{
    std::vector<std::string> warnings;
    Fan f = parse_fan_file(path, &warnings);
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << "\n";
    return f;
}

int cmd_mu(const std::string& path, const MapOptions& m, bool machine)
{
    Fan f = load_fan(path);
    ComplementMap psi = load_map(m, f.rank());
    auto mu = shared_assignment(psi);
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        Cone c = f.cone(i);
        Rational v = (*mu)(c);
        if (machine)
        {
            json rays = json::array();
            for (const auto& r : c.rays())
                rays.push_back(vec_json(r));
            std::cout << json{{"cone", f.cones()[i]}, {"rays", rays}, {"dim", c.dim()}, {"mu", to_string(v)}}.dump()
                      << "\n";
        }
        else
        {
            std::cout << to_string(c) << "  " << to_string(v) << "\n";
        }
    }
    return ok;
}

int cmd_count(const std::string& path, const MapOptions& m, bool oracle, unsigned tmax, bool machine)
{
    LatticePolytope p = parse_polytope_file(path);
    ComplementMap psi = load_map(m, p.rank());
    int code = ok;
    for (unsigned t = 1; t <= std::max(1u, tmax); ++t)
    {
        LatticePolytope q = t == 1 ? p : dilate(p, t);
        Integer n = count_via_todd(q, psi);
        std::optional<Integer> brute;
        if (oracle)
            brute = count_bruteforce(q);
        bool agree = !brute || *brute == n;
        if (!agree)
            code = verification;
        if (machine)
        {
            json rec{{"t", t}, {"count", n.str()}};
            if (brute)
            {
                rec["oracle"] = brute->str();
                rec["agree"] = agree;
            }
            std::cout << rec.dump() << "\n";
            continue;
        }
        if (tmax > 0)
            std::cout << "t=" << t << " ";
        std::cout << n;
        if (brute)
            std::cout << " oracle=" << *brute << (agree ? " agree" : " DISAGREE");
        std::cout << "\n";
    }
    return code;
}

int cmd_resolve(const std::string& path, const MapOptions& m, const std::string& rule, bool machine)
{
    Fan f = load_fan(path);
    ResolveOptions opt;
    opt.rule = rule == "most-zeros" ? CenterRule::MostZeros : CenterRule::MinimalSum;
    if (!m.flag.empty())
    {
        ComplementMap psi = load_map(m, f.rank());
        opt.admissible = [psi](const Cone& c) { return psi.in_domain(c); };
    }
    Resolution r = resolve(f, opt);
    if (machine)
    {
        json rays = json::array(), cones = json::array(), history = json::array();
        for (const auto& v : r.fan.rays())
            rays.push_back(vec_json(v));
        for (auto c : r.fan.maximal_cones())
            cones.push_back(r.fan.cones()[c]);
        for (const auto& h : r.history)
            history.push_back(vec_json(h));
        std::cout << json{{"rays", rays}, {"cones", cones}, {"history", history}}.dump() << "\n";
        return ok;
    }
    std::cout << serialize(r.fan);
    for (const auto& h : r.history)
        std::cout << "# center " << to_string(h) << "\n";
    return ok;
}

int cmd_verify(std::vector<std::string> suites, const SuiteOptions& opt, bool machine)
{
    if (suites.empty())
        suites = suite_names();
    int code = ok;
    for (const auto& name : suites)
    {
        SuiteResult res = run_suite(name, opt);
        if (machine)
        {
            for (const auto& c : res.cases)
                std::cout << json{{"suite", name}, {"case", c.index}, {"ok", c.ok}, {"detail", c.detail}}.dump()
                          << "\n";
            std::cout << json{{"suite", name}, {"passed", res.passed()}, {"cases", res.cases.size()}, {"ok", res.ok()}}
                             .dump()
                      << "\n";
        }
        else
        {
            std::cout << name << ": " << (res.ok() ? "PASS" : "FAIL") << " " << res.passed() << "/"
                      << res.cases.size() << "\n";
        }
        if (const CaseRecord* bad = res.first_failure())
        {
            code = verification;
            if (!machine)
                std::cerr << name << " case " << bad->index << " failed:\n" << bad->detail << "\n";
        }
    }
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Todd measures of rational cones and lattice point counts"};
    app.require_subcommand(1);

    MapOptions maps;
    bool machine = false;
    auto add_map_options = [&](CLI::App* sub) {
        auto* g = sub->add_option("--gram", maps.gram, "Gram matrix file");
        auto* f = sub->add_option("--flag", maps.flag, "flag file");
        auto* s = sub->add_flag("--standard", maps.standard, "standard inner product (default)");
        g->excludes(f)->excludes(s);
        f->excludes(s);
        sub->add_flag("--machine", machine, "JSON lines output");
    };

    std::string input;
    auto* mu = app.add_subcommand("mu", "print mu of every cone of a fan");
    mu->add_option("fan", input, "fan file")->required();
    add_map_options(mu);

    bool oracle = false;
    unsigned tmax = 0;
    auto* count = app.add_subcommand("count", "count the lattice points of a polytope");
    count->add_option("polytope", input, "polytope file")->required();
    count->add_flag("--oracle", oracle, "also count by enumeration");
    count->add_option("--tmax", tmax, "report dilations t = 1..k");
    add_map_options(count);

    std::string rule = "minimal-sum";
    auto* res = app.add_subcommand("resolve", "resolve the singularities of a fan");
    res->add_option("fan", input, "fan file")->required();
    res->add_option("--rule", rule, "center rule")->check(CLI::IsMember({"minimal-sum", "most-zeros"}));
    add_map_options(res);

    std::vector<std::string> suites;
    SuiteOptions sopt;
    std::string dims;
    auto* ver = app.add_subcommand("verify", "run the verification suites");
    ver->add_option("--suite", suites, "suite name, repeatable")->check(CLI::IsMember(suite_names()));
    ver->add_option("--seed", sopt.seed, "random seed");
    ver->add_option("--dims", dims, "polytope dimensions, e.g. 1,2,3");
    ver->add_option("--cases", sopt.cases, "cases per suite or per dimension");
    ver->add_option("--rank", sopt.rank, "ambient rank for flag-formula");
    ver->add_option("--tmax", sopt.tmax, "largest dilation for ehrhart");
    ver->add_flag("--machine", machine, "JSON lines output");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try
    {
        if (*mu)
            return cmd_mu(input, maps, machine);
        if (*count)
            return cmd_count(input, maps, oracle, tmax, machine);
        if (*res)
            return cmd_resolve(input, maps, rule, machine);
        std::stringstream ss(dims);
        for (std::string d; std::getline(ss, d, ',');)
            sopt.dims.push_back(std::stoul(d));
        return cmd_verify(suites, sopt, machine);
    }
    catch (const ParseError& e)
    {
        std::cerr << "parse error: " << e.what() << "\n";
        return usage;
    }
    catch (const InvalidFan& e)
    {
        std::cerr << e.what() << "\n";
        return usage;
    }
    catch (const NonIntegerTotal& e)
    {
        std::cerr << "verification failure: " << e.what() << "\n";
        return verification;
    }
    catch (const NotInDomain& e)
    {
        std::cerr << "not in domain: " << e.what() << "\n";
        return domain;
    }
    catch (const DegeneratePolytope& e)
    {
        std::cerr << "degenerate polytope: " << e.what() << "\n";
        return domain;
    }
    catch (const NotSmooth& e)
    {
        std::cerr << e.what() << "\n";
        return domain;
    }
    catch (const NonGenericFlag& e)
    {
        std::cerr << e.what() << "\n";
        return domain;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "invalid input: " << e.what() << "\n";
        return usage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
