#pragma once

#include <string>

#include <json.hpp>

#include "tga/coef_vector.hpp"
#include "tga/constants.hpp"
#include "tga/search.hpp"
#include "tga/spaces.hpp"

namespace tga {

/// Key order is preserved, so equal inputs dump to equal bytes.
using Json = nlohmann::ordered_json;

/// Sorted [index, value] pairs.
Json to_json(const CoefVector& x);
CoefVector coef_vector_from_json(const Json& j);
Json to_json(const IndexSet& a);
IndexSet index_set_from_json(const Json& j);
/// Sorted [index, sign] pairs.
Json to_json(const SignPattern& eps);
SignPattern sign_pattern_from_json(const Json& j);

/// Real number; infinities are written as the strings "inf" / "-inf".
Json number_json(double v);
double number_from_json(const Json& j);

/// Space record, e.g. {"family": "lp", "p": 2, "cap": 512}. Families: lp, summing_c0,
/// lorentz, weighted_l1, max_functionals, circ_renorm.
Json to_json(const SpaceSpec& space);
/// Throws InputError on malformed records.
SpaceSpec space_from_json(const Json& j);
/// Lowercase file-name-safe form of a label: "Lp(2)" -> "lp-2".
std::string slug(const std::string& label);

/// Only the fields used by `kind` are written.
Json to_json(const Witness& w, ConstantKind kind);
Witness witness_from_json(const Json& j);
Json to_json(const SearchBudget& b);
Json to_json(const ConstantEstimate& e);

/// Reads the optional fields of a search record over `defaults`.
SearchConfig search_config_from_json(const Json& j, SearchConfig defaults = {});
Json to_json(const SearchConfig& c);
ExhaustiveFamily family_from_json(const Json& j);
Json to_json(const ExhaustiveFamily& f);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

}  // namespace tga
