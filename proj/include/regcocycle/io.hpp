#ifndef REGCOCYCLE_IO_HPP
#define REGCOCYCLE_IO_HPP

// JSON encodings of balls, cocycle tables, loop analyses and extension
// elements, plus the action and subgroup input files of the command line
// tool. Words are written as strings like "a1 B2".

#include <json.hpp>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "regcocycle/extension.hpp"

namespace regcocycle {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"genus", "radius", "spheres", "words", "adjacency"}; adjacency[e][x]
/// is e·x or -1.
nlohmann::json ball_to_json(const CayleyBall& ball);
/// Validates the data through CayleyBall::restore.
CayleyBall ball_from_json(const nlohmann::json& j);

/// DOT graph of the ball: one node per element, one edge per generator
/// a_i, b_i (inverse letters are the same edges reversed).
std::string ball_to_dot(const CayleyBall& ball);

/// One JSON object per line: {"g1", "g2", "value", "provenance"}.
void write_cocycle_jsonl(std::ostream& out, const TableCocycle& table);
/// Reads lines written by write_cocycle_jsonl into a table on `ball`.
TableCocycle read_cocycle_jsonl(std::istream& in, std::shared_ptr<const CayleyBall> ball, const Coefficients& coeffs,
                                const FiniteAction& action);

nlohmann::json loop_to_json(const LoopAnalysis& a, const SurfaceGroup& group);

/// {"base": word, "fiber": [...]}.
nlohmann::json ext_to_json(const Extension& ext, const ExtElement& p);
ExtElement ext_from_json(const Extension& ext, const nlohmann::json& j);

/// {"a1": [[...]], "b1": ...}: integer matrices per generator; missing
/// generators act trivially. Returns matrices in the order a1, b1, a2, ...
std::vector<Eigen::MatrixXi> parse_action(const nlohmann::json& j, const SurfaceGroup& group, std::size_t dimension);
/// {"a1": [1, 0], ...}: permutation images per generator; missing
/// generators act trivially.
std::vector<std::vector<int>> parse_subgroup(const nlohmann::json& j, const SurfaceGroup& group);

}  // namespace regcocycle

#endif  // REGCOCYCLE_IO_HPP
