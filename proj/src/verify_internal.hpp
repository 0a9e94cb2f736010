#pragma once

#include "tga/greedy.hpp"
#include "tga/search.hpp"
#include "tga/serialize.hpp"

namespace tga::detail {

/// (bound - value) / |bound|.
double relative_slack(double bound, double value);
/// value > bound beyond the identity tolerance.
bool exceeds(double value, double bound);
/// Greedy ordering with ties broken uniformly at random, padded with the lowest unused indices.
GreedyOrdering random_ordering(const CoefVector& x, std::size_t length, Rng& rng);
/// {"x": ..., "ordering": [...]}.
Json ordering_json(const GreedyOrdering& o);

}  // namespace tga::detail
