#pragma once
#include <vector>

namespace flatcal {

// all multi-indices over `dims` axes with |alpha| == total
inline void multi_indices_exact(int dims, int total, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(dims, 0);
  // lexicographic recursion, iterative to keep it allocation-light
  struct Rec {
    static void go(int axis, int left, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
      if (axis == static_cast<int>(cur.size()) - 1) {
        cur[axis] = left;
        out.push_back(cur);
        return;
      }
      for (int v = left; v >= 0; --v) {
        cur[axis] = v;
        go(axis + 1, left - v, cur, out);
      }
    }
  };
  if (dims == 0) {
    if (total == 0) out.push_back({});
    return;
  }
  Rec::go(0, total, cur, out);
}

inline int multi_total(const std::vector<int>& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

inline double multinomial(int total, const std::vector<int>& parts) {
  // total! / prod parts_j!
  double v = 1.0;
  int used = 0;
  for (int p : parts) {
    for (int j = 1; j <= p; ++j) {
      ++used;
      v *= static_cast<double>(used) / static_cast<double>(j);
    }
  }
  (void)total;
  return v;
}

}  // namespace flatcal
