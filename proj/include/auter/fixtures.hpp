#pragma once

// The four reference instances, embedded so that tests and the CLI do not
// depend on the working directory. data/*.inst hold the same text.

#include <string>
#include <utility>
#include <vector>

#include "auter/io.hpp"

namespace auter::fixtures {

inline const char* fix_r2_text() {
  return R"(# Rose with two petals, trivial group, identity marking.
[graph]
basepoint = *
edge a : * -> *
edge b : * -> *

[marking]
x1 = a
x2 = b
)";
}

inline MarkedGGraph fix_r2() { return parse(fix_r2_text()); }

inline const char* fix_r2_swap_text() {
  return R"(# Two-petal rose with the petals swapped by an involution.
[graph]
basepoint = *
edge a : * -> *
edge b : * -> *

[group]
order = 2
gen t : a->b, b->a

[marking]
x1 = a
x2 = b
)";
}

inline MarkedGGraph fix_r2_swap() { return parse(fix_r2_swap_text()); }

inline const char* fix_theta_text() {
  return R"(# Theta graph: three edges from the basepoint to v, t swaps e2 and e3.
[graph]
basepoint = *
vertex v
edge e1 : * -> v
edge e2 : * -> v
edge e3 : * -> v

[group]
order = 2
gen t : e2->e3, e3->e2

[marking]
x1 = e1 ~e2
x2 = e1 ~e3
)";
}

inline MarkedGGraph fix_theta() { return parse(fix_theta_text()); }

inline const char* fix_r2w_text() {
  return R"(# Two-petal rose with the non-minimal marking x2 = b a.
[graph]
basepoint = *
edge a : * -> *
edge b : * -> *

[marking]
x1 = a
x2 = b a
)";
}

inline MarkedGGraph fix_r2w() { return parse(fix_r2w_text()); }

inline std::vector<std::pair<std::string, MarkedGGraph>> all() {
  return {{"FIX-R2", fix_r2()}, {"FIX-R2-SWAP", fix_r2_swap()}, {"FIX-THETA", fix_theta()}, {"FIX-R2W", fix_r2w()}};
}

}  // namespace auter::fixtures
