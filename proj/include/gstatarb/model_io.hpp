#pragma once

// JSON lattice model files.
//
//   {"kind": "binomial",  "prices": {"s0","up","down","uu","ud","dd"}, "weights": [4]}
//   {"kind": "trinomial", "prices": {"s0","up","down","top","uu","ud","dd"}, "weights": [6]}
//   {"kind": "trend", "orientation": "positive" | "negative",
//    "prices": {"s0","up","down","uu","ud","dd","trend_up","trend_down"}, "weights": [5],
//    "alpha": 0}
//
// "alpha" is optional.

#include <istream>
#include <string>

#include "gstatarb/lattice.hpp"

namespace gstatarb {

struct ModelSpec {
    LatticeModel model;
    double alpha = 0.0;
};

/// Throws ParseError on malformed JSON or schema violations, InvalidModel on
/// price/weight invariants.
ModelSpec parse_model_json(const std::string& text);
ModelSpec load_model_file(const std::string& filename);

/// Named fixtures: "sec34" and "bondarenko-counterexample".
ModelSpec builtin_model(const std::string& name);

}  // namespace gstatarb
