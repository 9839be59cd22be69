#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace topk {

// Exact rational scalar used by everything that must be tolerance-free:
// loss matrices, cell geometry, observability certificates, estimator tables.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

double rat_to_double(const Rat& r);

// "p" when the denominator is 1, otherwise "p/q".
std::string rat_str(const Rat& r);

} // namespace topk
