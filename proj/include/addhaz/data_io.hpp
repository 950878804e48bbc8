#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "addhaz/types.hpp"

namespace addhaz {

// Reads a comma-separated file with a header row. `covariate_cols` selects the
// covariates in order; values are kept raw (unscaled).
Dataset load_dataset(const std::string& path, const std::string& time_col,
                     const std::string& status_col,
                     const std::vector<std::string>& covariate_cols);

// Maps every covariate column through (x - min) / (max - min) and records the
// original (min, max). A constant column cannot span [0,1] and is an error.
Dataset rescale_covariates(const Dataset& d);

enum class TiePolicy { reject, jitter };

// With `reject`, fails if two event records share a time. With `jitter`, tied
// event times get deterministic seed-derived offsets smaller than half the
// minimum gap between distinct observed times.
Dataset check_ties(const Dataset& d, TiePolicy policy, std::uint64_t seed = 0);

EventTable build_event_table(const Dataset& d);

namespace detail {
// Indices of d.records ordered descending by (time, status, covariates).
// Accumulating risk sums in this order makes them invariant under permutation
// of the input rows.
std::vector<std::size_t> canonical_order(const Dataset& d);
}  // namespace detail

}  // namespace addhaz
