#include "wander/types.hpp"

namespace wander {

double diameter(const std::vector<Complex>& pts) {
  require(pts.size() >= 2, "diameter needs at least two points");
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, std::abs(pts[i] - pts[j]));
  return best;
}

}  // namespace wander
