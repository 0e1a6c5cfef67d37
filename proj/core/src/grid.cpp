#include "cdflow/grid.hpp"

#include <string>

namespace cdflow {

Grid make_grid(int n1, int n2, double length, double height) {
  if (n1 < 8 || n2 < 8)
    throw DomainError("grid needs at least 8 cells per direction, got " +
                      std::to_string(n1) + "x" + std::to_string(n2));
  if (!(length > 0.0)) throw DomainError("cylinder length must be positive");
  if (!(height > 0.0)) throw DomainError("mass coordinate height must be positive");
  Grid g;
  g.n1 = n1;
  g.n2 = n2;
  g.length = length;
  g.height = height;
  g.h1 = length / n1;
  g.h2 = height / n2;
  return g;
}

}  // namespace cdflow
