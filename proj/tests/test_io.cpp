#include "toddcount/errors.hpp"
#include "toddcount/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace toddcount;

namespace {

std::string fixture(const std::string& name)
{
    return std::string(TODDCOUNT_FIXTURES) + "/" + name;
}

template <typename Fn>
std::size_t parse_error_line(Fn fn)
{
    try
    {
        fn();
    }
    catch (const ParseError& e)
    {
        return e.line();
    }
    ADD_FAILURE() << "no ParseError";
    return 0;
}

Fan fan_text(const std::string& s, std::vector<std::string>* w = nullptr)
{
    std::istringstream in(s);
    return parse_fan(in, w);
}

} // namespace

TEST(ParseFan, ProjectivePlaneFixture)
{
    Fan f = parse_fan_file(fixture("p2.fan"));
    EXPECT_EQ(f.ray_count(), 3u);
    EXPECT_EQ(f.size(), 7u);
}

TEST(ParseFan, OverlappingIsInvalid)
{
    EXPECT_THROW(parse_fan_file(fixture("overlapping.fan")), InvalidFan);
}

TEST(ParseFan, NonPrimitiveRayNormalized)
{
    std::vector<std::string> warnings;
    Fan f = parse_fan_file(fixture("nonprimitive.fan"), &warnings);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("(1,2)"), std::string::npos);
    EXPECT_TRUE(f.ray_index(IntVector{1, 2}).has_value());
}

TEST(ParseFan, Errors)
{
    EXPECT_EQ(parse_error_line([] { fan_text("fan rank=2\nray 0 1 0\nray 1 0 x\n"); }), 3u);
    EXPECT_EQ(parse_error_line([] { fan_text("# c\nfan rank=2\nray 0 1\n"); }), 3u);
    EXPECT_EQ(parse_error_line([] { fan_text("fan rank=2\nray 0 1 0\ncone 0 4\n"); }), 3u);
    EXPECT_EQ(parse_error_line([] { fan_text("fan rank=2\nray 0 0 0\n"); }), 2u);
    EXPECT_EQ(parse_error_line([] { fan_text("fan rank=2\nspoke 0 1 0\n"); }), 2u);
    EXPECT_EQ(parse_error_line([] { fan_text("cone rank=2\n"); }), 1u);
    EXPECT_THROW(fan_text("fan rank=2\nray 0 1 0\nray 1 -1 0\ncone 0 1\n"), InvalidFan);
    EXPECT_THROW(parse_fan_file(fixture("missing.fan")), ParseError);
}

TEST(ParseGram, FixtureAndErrors)
{
    InnerProductMap g = parse_gram_file(fixture("cartan2.gram"));
    EXPECT_EQ(g.gram(0, 1), -1);
    std::istringstream half("gram rank=1\n1/2\n");
    EXPECT_EQ(parse_gram(half).gram(0, 0), Rational(1, 2));
    std::istringstream indef("gram rank=2\n1 0\n0 -1\n");
    EXPECT_THROW(parse_gram(indef), ParseError);
    std::istringstream junk("gram rank=2\n1 0\n0 q\n");
    EXPECT_EQ(parse_error_line([&] { parse_gram(junk); }), 3u);
}

TEST(ParseFlag, FixtureAndErrors)
{
    FlagMap f = parse_flag_file(fixture("line12.flag"));
    EXPECT_EQ(f.rows[0], (IntVector{1, 2}));
    std::istringstream dep("flag rank=2\n1 2\n2 4\n");
    EXPECT_THROW(parse_flag(dep), ParseError);
}

TEST(ParsePolytope, Fixtures)
{
    EXPECT_EQ(parse_polytope_file(fixture("square.poly")).vertices().size(), 4u);
    LatticePolytope m = parse_polytope_file(fixture("square_midpoint.poly"));
    EXPECT_EQ(m.vertices().size(), 4u);
    EXPECT_THROW(parse_polytope_file(fixture("collinear.poly")), DegeneratePolytope);
}

TEST(Serialize, RoundTripIsIdempotent)
{
    for (const char* name : {"p2.fan", "p3.fan", "p1xp1.fan", "hirzebruch2.fan", "weighted112.fan",
                             "singular_pentagon.fan", "singular_cone.fan", "nonprimitive.fan"})
    {
        std::string once = serialize(parse_fan_file(fixture(name)));
        std::string twice = serialize(fan_text(once));
        EXPECT_EQ(once, twice) << name;
    }
    for (const char* name : {"square.poly", "square_midpoint.poly", "cube.poly", "triangle.poly", "segment.poly"})
    {
        std::string once = serialize(parse_polytope_file(fixture(name)));
        std::istringstream in(once);
        EXPECT_EQ(serialize(parse_polytope(in)), once) << name;
    }
    for (const char* name : {"cartan2.gram", "cartan3.gram"})
    {
        std::string once = serialize(parse_gram_file(fixture(name)));
        std::istringstream in(once);
        EXPECT_EQ(serialize(parse_gram(in)), once);
    }
    std::string fl = serialize(parse_flag_file(fixture("line11.flag")));
    std::istringstream in(fl);
    EXPECT_EQ(serialize(parse_flag(in)), fl);
}
