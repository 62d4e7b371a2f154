#pragma once

/*
 * Module documents: the JSON interchange format for graded modules.
 *
 * {
 *   "algebra":    {"profile": [2,1]},
 *   "generators": [0,1,2,3,4],            // basis degrees; ids are global,
 *                                         // ordered by (degree, listed order)
 *   "actions":    [{"op":"Sq1","src":0,"dst":[1]}, ...]
 * }
 *
 * Ops are aliases (Q0,Q1,Q2,P21,Sq1,Sq2,Sq4) or "Sq(r1,...,rk)".  Omitted
 * actions are zero.  Loading completes the declared ops to the full Milnor
 * basis by expressing every basis element as a polynomial in the declared
 * generators, then validates the full module axioms.
 */

#include "stmod/gmod.hpp"

#include <json.hpp>

#include <string>

namespace stmod {

GradedModule load_module_json(const nlohmann::json& doc);
GradedModule load_module_file(const std::string& path);

nlohmann::ordered_json save_module_json(const GradedModule& M);
void save_module_file(const GradedModule& M, const std::string& path);

}  // namespace stmod
