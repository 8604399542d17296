// Line-oriented text formats for fans, Gram matrices, flags and polytopes.
//
//   fan rank=<n>        ray <i> <c1> ... <cn>      cone <i1> ... <ik>
//   gram rank=<n>       n rows of n rationals
//   flag rank=<n>       n integer rows, row k completes F_k
//   polytope rank=<n>   vertex <c1> ... <cn>
//
// '#' starts a comment. Parse errors carry the 1-based line number.

#pragma once

#include "toddcount/complement_map.hpp"
#include "toddcount/fan.hpp"
#include "toddcount/polytope.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace toddcount {

/// Rays are made primitive (with a warning per changed ray), faces closed
/// and the result checked with validate_fan. Throws ParseError or InvalidFan.
Fan parse_fan(std::istream& in, std::vector<std::string>* warnings = nullptr);
InnerProductMap parse_gram(std::istream& in);
FlagMap parse_flag(std::istream& in);
/// Throws ParseError or DegeneratePolytope.
LatticePolytope parse_polytope(std::istream& in);

Fan parse_fan_file(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
InnerProductMap parse_gram_file(const std::filesystem::path& path);
FlagMap parse_flag_file(const std::filesystem::path& path);
LatticePolytope parse_polytope_file(const std::filesystem::path& path);

/// Rays in list order, then the maximal cones.
std::string serialize(const Fan& f);
std::string serialize(const InnerProductMap& g);
std::string serialize(const FlagMap& flag);
std::string serialize(const LatticePolytope& p);

} // namespace toddcount
