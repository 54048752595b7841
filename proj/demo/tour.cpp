// A short walk through the library at q = 7.

#include <iostream>

#include "kakeyalab/report.hpp"

using namespace kakeyalab;

int main() {
  auto f = make_field(7);

  // The graph of s -> 1/s and its collinear triples.
  auto g = inverse_construction(f);
  auto cs = build_structure(*f, g.points());
  std::cout << "inverse map on GF(7): " << json(g.indices()).dump() << "\n"
            << "  collinear triples " << cs.triple_count() << ", norm " << to_string(cs.norm()) << ", bound "
            << to_string(permutation_norm_bound(7)) << "\n";

  // Its dual cover and back.
  auto cover = primalize_best(g);
  std::cout << "dual cover size " << cover.size() << " (" << cover_json(cover).dump() << ")\n";
  auto d = normalize_and_dualize(cover);
  std::cout << "  R = " << d.r_min << ", dualizes to " << to_string(d.graph.kind()) << " "
            << json(d.graph.indices()).dump() << "\n";

  // Smallest cover by exhaustive search, against the lower bound.
  auto rep = min_besicovitch(f);
  std::cout << "smallest cover " << to_string(rep.value) << " after " << rep.nodes_visited << " nodes; lower bound "
            << to_string(besicovitch_lower_bound(7)) << "\n";

  // GF(9): x is element 3 and squares to -1.
  auto f9 = make_field(9);
  FieldElement i(f9, f9->element(3));
  std::cout << "GF(9) mod x^2+1: x*x has index " << (i * i).index() << ", -1 has index " << f9->neg(f9->one()).v << "\n";
}
