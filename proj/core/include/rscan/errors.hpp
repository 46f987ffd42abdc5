#pragma once

#include <stdexcept>

namespace rscan {

/// A trend-type statistic whose variance term is zero on the given table.
class ZeroVariance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A count table too thin to support the requested statistic
/// (fewer than two occupied genotype columns, empty margin, ...).
class DegenerateTable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rscan
