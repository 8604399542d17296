#include "toddcount/io.hpp"

#include "toddcount/errors.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace toddcount {

namespace {

struct Line
{
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in)
{
    std::vector<Line> out;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text))
    {
        ++number;
        if (auto hash = text.find('#'); hash != std::string::npos)
            text.erase(hash);
        std::istringstream ss(text);
        Line l{number, {}};
        for (std::string tok; ss >> tok;)
            l.tokens.push_back(tok);
        if (!l.tokens.empty())
            out.push_back(std::move(l));
    }
    return out;
}

Integer parse_integer(const std::string& tok, std::size_t line)
{
    std::size_t start = (tok.size() > 1 && (tok[0] == '-' || tok[0] == '+')) ? 1 : 0;
    if (start == tok.size() || tok.find_first_not_of("0123456789", start) != std::string::npos)
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    return Integer(tok[0] == '+' ? tok.substr(1) : tok);
}

std::size_t parse_index(const std::string& tok, std::size_t line)
{
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9)
        throw ParseError(line, "expected an index, got '" + tok + "'");
    return std::stoul(tok);
}

// "<kind> rank=<n>" on the first content line; returns n.
std::size_t parse_header(const std::vector<Line>& lines, const std::string& kind)
{
    if (lines.empty())
        throw ParseError(0, "empty input, expected '" + kind + " rank=<n>'");
    const Line& h = lines.front();
    if (h.tokens.size() != 2 || h.tokens[0] != kind || h.tokens[1].rfind("rank=", 0) != 0)
        throw ParseError(h.number, "expected '" + kind + " rank=<n>'");
    std::size_t n = parse_index(h.tokens[1].substr(5), h.number);
    if (n == 0)
        throw ParseError(h.number, "rank must be positive");
    return n;
}

IntVector parse_coords(const Line& l, std::size_t first, std::size_t n)
{
    if (l.tokens.size() != first + n)
        throw ParseError(l.number, "expected " + std::to_string(n) + " coordinates, got " +
                                       std::to_string(l.tokens.size() - first));
    IntVector v;
    for (std::size_t i = first; i < l.tokens.size(); ++i)
        v.push_back(parse_integer(l.tokens[i], l.number));
    return v;
}

std::string join(const IntVector& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + v[i].str();
    return s;
}

template <typename T>
T with_file(const std::filesystem::path& path, const std::function<T(std::istream&)>& fn)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError(0, "cannot open " + path.string());
    return fn(in);
}

} // namespace

Fan parse_fan(std::istream& in, std::vector<std::string>* warnings)
{
    auto lines = tokenize(in);
    const std::size_t n = parse_header(lines, "fan");
    std::map<std::size_t, IntVector> rays;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> cone_lines;
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const Line& l = lines[i];
        if (l.tokens[0] == "ray")
        {
            if (l.tokens.size() < 2)
                throw ParseError(l.number, "ray needs an index");
            std::size_t idx = parse_index(l.tokens[1], l.number);
            IntVector v = parse_coords(l, 2, n);
            if (is_zero(v))
                throw ParseError(l.number, "ray " + std::to_string(idx) + " is zero");
            IntVector p = primitive_vector(v);
            if (p != v && warnings)
                warnings->push_back("line " + std::to_string(l.number) + ": ray " + to_string(v) +
                                    " normalized to " + to_string(p));
            if (!rays.emplace(idx, p).second)
                throw ParseError(l.number, "duplicate ray index " + std::to_string(idx));
        }
        else if (l.tokens[0] == "cone")
        {
            std::vector<std::size_t> ids;
            for (std::size_t t = 1; t < l.tokens.size(); ++t)
                ids.push_back(parse_index(l.tokens[t], l.number));
            cone_lines.emplace_back(l.number, std::move(ids));
        }
        else
        {
            throw ParseError(l.number, "unknown keyword '" + l.tokens[0] + "'");
        }
    }
    std::size_t expect = 0;
    for (const auto& [idx, v] : rays)
        if (idx != expect++)
            throw ParseError(0, "ray indices must be 0.." + std::to_string(rays.size() - 1));
    std::vector<IntVector> ray_list;
    for (auto& [idx, v] : rays)
        ray_list.push_back(v);

    std::vector<RayIndexSet> cones;
    for (std::size_t i = 0; i < ray_list.size(); ++i)
        cones.push_back({i});
    for (auto& [number, ids] : cone_lines)
    {
        std::set<std::size_t> uniq(ids.begin(), ids.end());
        if (uniq.size() != ids.size())
            throw ParseError(number, "repeated ray in cone");
        for (auto id : ids)
            if (id >= ray_list.size())
                throw ParseError(number, "unknown ray index " + std::to_string(id));
        cones.emplace_back(uniq.begin(), uniq.end());
    }

    Fan f;
    try
    {
        f = Fan(n, ray_list, cones);
    }
    catch (const std::invalid_argument& e)
    {
        throw InvalidFan(e.what());
    }
    FanReport report = validate_fan(f);
    if (!report.ok)
    {
        std::string msg = "invalid fan:";
        for (const auto& v : report.violations)
            msg += "\n  " + v;
        throw InvalidFan(msg);
    }
    return f;
}

InnerProductMap parse_gram(std::istream& in)
{
    auto lines = tokenize(in);
    const std::size_t n = parse_header(lines, "gram");
    if (lines.size() != n + 1)
        throw ParseError(lines.back().number, "expected " + std::to_string(n) + " rows");
    RationalMatrix g(n, n);
    for (std::size_t r = 0; r < n; ++r)
    {
        const Line& l = lines[r + 1];
        if (l.tokens.size() != n)
            throw ParseError(l.number, "expected " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c)
        {
            try
            {
                g(r, c) = parse_rational(l.tokens[c]);
            }
            catch (const std::invalid_argument&)
            {
                throw ParseError(l.number, "expected a rational, got '" + l.tokens[c] + "'");
            }
        }
    }
    try
    {
        return InnerProductMap::from_gram(g);
    }
    catch (const std::invalid_argument& e)
    {
        throw ParseError(lines.front().number, e.what());
    }
}

FlagMap parse_flag(std::istream& in)
{
    auto lines = tokenize(in);
    const std::size_t n = parse_header(lines, "flag");
    if (lines.size() != n + 1)
        throw ParseError(lines.back().number, "expected " + std::to_string(n) + " rows");
    std::vector<IntVector> rows;
    for (std::size_t r = 0; r < n; ++r)
        rows.push_back(parse_coords(lines[r + 1], 0, n));
    try
    {
        return FlagMap::from_rows(rows);
    }
    catch (const std::invalid_argument& e)
    {
        throw ParseError(lines.front().number, e.what());
    }
}

LatticePolytope parse_polytope(std::istream& in)
{
    auto lines = tokenize(in);
    const std::size_t n = parse_header(lines, "polytope");
    std::vector<IntVector> pts;
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const Line& l = lines[i];
        if (l.tokens[0] != "vertex")
            throw ParseError(l.number, "unknown keyword '" + l.tokens[0] + "'");
        pts.push_back(parse_coords(l, 1, n));
    }
    return LatticePolytope::from_points(std::move(pts), n);
}

Fan parse_fan_file(const std::filesystem::path& path, std::vector<std::string>* warnings)
{
    return with_file<Fan>(path, [&](std::istream& in) { return parse_fan(in, warnings); });
}

InnerProductMap parse_gram_file(const std::filesystem::path& path)
{
    return with_file<InnerProductMap>(path, [](std::istream& in) { return parse_gram(in); });
}

FlagMap parse_flag_file(const std::filesystem::path& path)
{
    return with_file<FlagMap>(path, [](std::istream& in) { return parse_flag(in); });
}

LatticePolytope parse_polytope_file(const std::filesystem::path& path)
{
    return with_file<LatticePolytope>(path, [](std::istream& in) { return parse_polytope(in); });
}

std::string serialize(const Fan& f)
{
    std::string s = "fan rank=" + std::to_string(f.rank()) + "\n";
    for (std::size_t i = 0; i < f.ray_count(); ++i)
        s += "ray " + std::to_string(i) + " " + join(f.rays()[i]) + "\n";
    for (auto c : f.maximal_cones())
    {
        if (f.dim(c) == 0)
            continue;
        s += "cone";
        for (auto r : f.cones()[c])
            s += " " + std::to_string(r);
        s += "\n";
    }
    return s;
}

std::string serialize(const InnerProductMap& g)
{
    std::string s = "gram rank=" + std::to_string(g.gram.rows()) + "\n";
    for (std::size_t r = 0; r < g.gram.rows(); ++r)
    {
        for (std::size_t c = 0; c < g.gram.cols(); ++c)
            s += (c ? " " : "") + to_string(g.gram(r, c));
        s += "\n";
    }
    return s;
}

std::string serialize(const FlagMap& flag)
{
    std::string s = "flag rank=" + std::to_string(flag.rows.size()) + "\n";
    for (const auto& r : flag.rows)
        s += join(r) + "\n";
    return s;
}

std::string serialize(const LatticePolytope& p)
{
    std::string s = "polytope rank=" + std::to_string(p.rank()) + "\n";
    for (const auto& v : p.vertices())
        s += "vertex " + join(v) + "\n";
    return s;
}

} // namespace toddcount
