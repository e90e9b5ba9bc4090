#pragma once

#include <iosfwd>
#include <string>

#include "cek/instance.hpp"

namespace cek {

// Line-oriented instance format.
//
//   c <comment>
//   p cew <n> <m>        weighted; m counts the e lines
//   e <u> <v> <w>        edge, 1-based ids, w a positive number or "inf"
//   a <u> <v> <w>        anti-edge weight override (default weight is 1)
//
//   p cep <n> <m>        unweighted; e lines carry no weight
//   e <u> <v>
//
// Unit mode accepts cep headers only. Weighted files parse in integer mode
// (integral weights) or real mode (decimal weights, micro precision).
// Serialization is canonical, so parse -> serialize -> parse reproduces the
// instance exactly.

Instance parse_instance(std::istream& in, Mode mode);
Instance parse_instance(const std::string& text, Mode mode);
Instance load_instance(const std::string& path, Mode mode);

std::string serialize(const Instance& g);
void save_instance(const Instance& g, const std::string& path);

}  // namespace cek
