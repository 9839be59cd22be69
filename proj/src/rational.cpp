#include "topk/rational.hpp"

namespace topk {

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

std::string rat_str(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += "/";
    s += denominator(r).str();
  }
  return s;
}

} // namespace topk
