#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "degen_dt/geom.hpp"
#include "degen_dt/pointsets.hpp"

namespace degen_dt {

/// Thrown when an exact cocircularity makes the Delaunay triangulation
/// ambiguous. Simulation loops catch it and resample.
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Grid codes

/// One bit per cell. Cell (i, j) has bottom-left corner (i, j); its bit lives
/// at index j*m + i. Bit 1 is the positive-slope diagonal '/' joining (i, j)
/// to (i+1, j+1); bit 0 is '\' joining (i+1, j) to (i, j+1).
struct GridCode {
  int m = 0;
  std::vector<std::uint8_t> bits;

  GridCode() = default;
  explicit GridCode(int m_) : m(m_), bits(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0) {}

  std::uint8_t& at(int i, int j) { return bits[static_cast<std::size_t>(j * m + i)]; }
  std::uint8_t at(int i, int j) const { return bits[static_cast<std::size_t>(j * m + i)]; }

  friend bool operator==(const GridCode&, const GridCode&) = default;
  friend auto operator<=>(const GridCode&, const GridCode&) = default;
};

/// Matrix rows as printed in a figure: top row (j = m-1) first.
inline std::vector<std::string> to_rows(const GridCode& code) {
  std::vector<std::string> rows;
  for (int j = code.m - 1; j >= 0; --j) {
    std::string row;
    for (int i = 0; i < code.m; ++i) row.push_back(code.at(i, j) ? '1' : '0');
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string to_key(const GridCode& code) {
  std::string key;
  for (const auto& row : to_rows(code)) {
    if (!key.empty()) key.push_back('|');
    key += row;
  }
  return key;
}

inline GridCode grid_code_from_rows(const std::vector<std::string>& rows) {
  const int m = static_cast<int>(rows.size());
  GridCode code(m);
  for (int r = 0; r < m; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != m) {
      throw InvalidInput("grid code rows must form an m x m matrix");
    }
    for (int i = 0; i < m; ++i) {
      const char c = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
      if (c != '0' && c != '1') throw InvalidInput("grid code entries must be 0 or 1");
      code.at(i, m - 1 - r) = c == '1';
    }
  }
  return code;
}

inline GridCode grid_code_from_key(const std::string& key) {
  std::vector<std::string> rows;
  std::stringstream ss(key);
  std::string row;
  while (std::getline(ss, row, '|')) rows.push_back(row);
  return grid_code_from_rows(rows);
}

/// Code with index bits: bit (j*m+i) of `value` is cell (i, j).
inline GridCode grid_code_from_index(int m, std::uint64_t value) {
  GridCode code(m);
  for (std::size_t b = 0; b < code.bits.size(); ++b) code.bits[b] = (value >> b) & 1U;
  return code;
}

/// Diagonal of one cell from its perturbed corners: the cell takes '/' when
/// the top-left corner is outside the circle through the other three.
inline std::uint8_t cell_diagonal(const Point2& bl, const Point2& br, const Point2& tr, const Point2& tl) {
  const int s = detail::incircle_sign(bl, br, tr, tl);
  if (s == 0) throw DegenerateConfiguration("grid cell corners are cocircular");
  return s < 0 ? 1 : 0;
}

inline GridCode grid_dt(const PointSet& perturbed) {
  if (perturbed.kind != PointSetKind::Grid) throw InvalidInput("grid_dt: not a grid point set");
  const int m = perturbed.parameter;
  GridCode code(m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const Point2& bl = perturbed.at_label(grid_label(m, i, j));
      const Point2& br = perturbed.at_label(grid_label(m, i + 1, j));
      const Point2& tr = perturbed.at_label(grid_label(m, i + 1, j + 1));
      const Point2& tl = perturbed.at_label(grid_label(m, i, j + 1));
      if (orient2d(bl, br, tr) != Sign::Positive) {
        throw PreconditionError("grid_dt: perturbation too large, cell corners not in convex position");
      }
      code.at(i, j) = cell_diagonal(bl, br, tr, tl);
    }
  }
  return code;
}

// ---------------------------------------------------------------------------
// Triangulations and polygon codes

using Triangle = std::array<int, 3>;  // vertex labels, counter-clockwise

struct Triangulation {
  std::vector<Triangle> triangles;
};

/// Rotates each triangle so its smallest label comes first, then sorts.
inline Triangulation normalized(Triangulation t) {
  for (auto& tri : t.triangles) {
    const auto it = std::min_element(tri.begin(), tri.end());
    std::rotate(tri.begin(), it, tri.end());
  }
  std::sort(t.triangles.begin(), t.triangles.end());
  return t;
}

using Diagonal = std::pair<int, int>;  // 1 <= first < second <= n

struct PolygonCode {
  int n = 0;
  std::vector<Diagonal> diagonals;  // sorted

  friend bool operator==(const PolygonCode&, const PolygonCode&) = default;
  friend auto operator<=>(const PolygonCode&, const PolygonCode&) = default;
};

inline std::string to_key(const PolygonCode& code) {
  std::string key;
  for (const auto& [a, b] : code.diagonals) {
    if (!key.empty()) key.push_back(',');
    key += std::to_string(a) + '-' + std::to_string(b);
  }
  return key;
}

inline PolygonCode polygon_code_from_key(int n, const std::string& key) {
  PolygonCode code{n, {}};
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) throw InvalidInput("bad polygon code key");
    code.diagonals.emplace_back(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
  }
  std::sort(code.diagonals.begin(), code.diagonals.end());
  return code;
}

inline bool is_polygon_side(int n, int a, int b) {
  const int d = std::abs(a - b);
  return d == 1 || d == n - 1;
}

/// Two chords cross iff their endpoints interleave around the circle.
inline bool chords_cross(const Diagonal& p, const Diagonal& q) {
  const auto [a, b] = p;
  const auto [c, d] = q;
  if (a == c || a == d || b == c || b == d) return false;
  const bool c_inside = a < c && c < b;
  const bool d_inside = a < d && d < b;
  return c_inside != d_inside;
}

inline bool is_valid(const PolygonCode& code) {
  const int n = code.n;
  if (n < 3 || static_cast<int>(code.diagonals.size()) != n - 3) return false;
  for (std::size_t k = 0; k < code.diagonals.size(); ++k) {
    const auto [a, b] = code.diagonals[k];
    if (a < 1 || b > n || a >= b || is_polygon_side(n, a, b)) return false;
    if (k > 0 && code.diagonals[k - 1] >= code.diagonals[k]) return false;
    for (std::size_t l = 0; l < k; ++l) {
      if (chords_cross(code.diagonals[l], code.diagonals[k])) return false;
    }
  }
  return true;
}

/// Triangles of a convex-polygon triangulation given by its diagonals.
inline Triangulation triangles_of(const PolygonCode& code) {
  const int n = code.n;
  std::vector<std::vector<char>> edge(static_cast<std::size_t>(n + 1), std::vector<char>(static_cast<std::size_t>(n + 1), 0));
  auto mark = [&](int a, int b) { edge[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = edge[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1; };
  for (int v = 1; v <= n; ++v) mark(v, v % n + 1);
  for (const auto& [a, b] : code.diagonals) mark(a, b);
  Triangulation t;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (edge[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
        for (int c = b + 1; c <= n; ++c)
          if (edge[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] && edge[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)])
            t.triangles.push_back({a, b, c});
  return t;
}

inline PolygonCode code_of(int n, const Triangulation& t) {
  PolygonCode code{n, {}};
  for (const auto& tri : t.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = tri[static_cast<std::size_t>(e)], b = tri[static_cast<std::size_t>((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      if (!is_polygon_side(n, a, b)) code.diagonals.emplace_back(a, b);
    }
  }
  std::sort(code.diagonals.begin(), code.diagonals.end());
  code.diagonals.erase(std::unique(code.diagonals.begin(), code.diagonals.end()), code.diagonals.end());
  return code;
}

/// Every triangulation of the convex n-gon, in lexicographic code order.
inline std::vector<PolygonCode> enumerate_polygon_triangulations(int n) {
  if (n < 3) throw InvalidInput("enumerate_polygon_triangulations: n must be >= 3");
  // Triangulations of the chain lo..hi hanging off the side (lo, hi).
  std::function<std::vector<std::vector<Diagonal>>(int, int)> rec = [&](int lo, int hi) {
    std::vector<std::vector<Diagonal>> out;
    if (hi - lo < 2) {
      out.emplace_back();
      return out;
    }
    for (int apex = lo + 1; apex < hi; ++apex) {
      const auto left = rec(lo, apex);
      const auto right = rec(apex, hi);
      for (const auto& l : left) {
        for (const auto& r : right) {
          std::vector<Diagonal> d = l;
          d.insert(d.end(), r.begin(), r.end());
          if (apex - lo >= 2 && !(lo == 1 && apex == n)) d.emplace_back(lo, apex);
          if (hi - apex >= 2 && !(apex == 1 && hi == n)) d.emplace_back(apex, hi);
          out.push_back(std::move(d));
        }
      }
    }
    return out;
  };
  std::vector<PolygonCode> codes;
  for (auto& d : rec(1, n)) {
    std::sort(d.begin(), d.end());
    codes.push_back({n, std::move(d)});
  }
  std::sort(codes.begin(), codes.end());
  return codes;
}

/// Image of a code under the dihedral relabelling v -> (+/-)(v-1) + shift (mod n).
inline PolygonCode relabel(const PolygonCode& code, int shift, bool reflect) {
  const int n = code.n;
  auto map = [&](int v) {
    int z = v - 1;
    if (reflect) z = (n - z) % n;
    return (z + shift) % n + 1;
  };
  PolygonCode out{n, {}};
  for (const auto& [a, b] : code.diagonals) {
    int x = map(a), y = map(b);
    if (x > y) std::swap(x, y);
    out.diagonals.emplace_back(x, y);
  }
  std::sort(out.diagonals.begin(), out.diagonals.end());
  return out;
}

/// Lexicographically smallest member of the dihedral orbit.
inline PolygonCode canonical_class(const PolygonCode& code) {
  PolygonCode best = code;
  for (int shift = 0; shift < code.n; ++shift) {
    for (bool reflect : {false, true}) {
      PolygonCode c = relabel(code, shift, reflect);
      if (c < best) best = std::move(c);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Delaunay triangulation of a perturbed convex polygon by Lawson flips.

struct PolygonDt {
  PolygonCode code;
  Triangulation triangulation;
  int flips = 0;
};

class PolygonFlipper {
 public:
  /// Runs from a fan at vertex 1. Vertices are assumed to be in convex
  /// position in label order; every candidate triangle is checked CCW.
  PolygonDt run(const PointSet& perturbed) {
    n_ = static_cast<int>(perturbed.size());
    if (n_ < 3) throw InvalidInput("convex_polygon_dt: need at least three points");
    pts_ = &perturbed;
    apex_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), -1);
    stack_.clear();
    for (int i = 1; i + 1 < n_; ++i) {
      add_triangle(0, i, i + 1);
      if (i + 1 < n_ - 1) stack_.emplace_back(0, i + 1);
    }
    const int budget = n_ * n_ + 16;
    int flips = 0;
    while (!stack_.empty()) {
      const auto [a, b] = stack_.back();
      stack_.pop_back();
      const int c = apex(a, b);
      const int d = apex(b, a);
      if (c < 0 || d < 0) continue;
      const Point2& pa = point(a);
      const Point2& pb = point(b);
      const Point2& pc = point(c);
      if (detail::orient2d_sign(pa, pb, pc) <= 0) {
        throw PreconditionError("convex_polygon_dt: points are not in convex position");
      }
      const int s = detail::incircle_sign(pa, pb, pc, point(d));
      if (s == 0) throw DegenerateConfiguration("polygon quadrilateral is cocircular");
      if (s < 0) continue;
      if (++flips > budget) throw std::logic_error("convex_polygon_dt: flip budget exceeded");
      // Quad a, d, b, c in CCW order; replace diagonal a-b by c-d.
      set_apex(a, b, -1);
      set_apex(b, a, -1);
      add_triangle(a, d, c);
      add_triangle(d, b, c);
      stack_.emplace_back(a, d);
      stack_.emplace_back(d, b);
      stack_.emplace_back(b, c);
      stack_.emplace_back(c, a);
    }

    PolygonDt out;
    out.flips = flips;
    out.code.n = n_;
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        const int c = apex(a, b);
        if (c > b) out.triangulation.triangles.push_back({a + 1, b + 1, c + 1});
        if (c >= 0 && apex(b, a) >= 0 && !is_polygon_side(n_, a + 1, b + 1)) {
          out.code.diagonals.emplace_back(a + 1, b + 1);
        }
      }
    }
    std::sort(out.triangulation.triangles.begin(), out.triangulation.triangles.end());
    return out;
  }

 private:
  int apex(int a, int b) const { return apex_[static_cast<std::size_t>(a * n_ + b)]; }
  void set_apex(int a, int b, int c) { apex_[static_cast<std::size_t>(a * n_ + b)] = c; }
  void add_triangle(int a, int b, int c) {
    set_apex(a, b, c);
    set_apex(b, c, a);
    set_apex(c, a, b);
  }
  const Point2& point(int v) const { return pts_->points[static_cast<std::size_t>(v)]; }

  int n_ = 0;
  const PointSet* pts_ = nullptr;
  std::vector<int> apex_;
  std::vector<std::pair<int, int>> stack_;
};

inline PolygonDt convex_polygon_dt(const PointSet& perturbed) {
  PolygonFlipper flipper;
  return flipper.run(perturbed);
}

/// Exhaustive empty-circumcircle search; small inputs only.
inline Triangulation brute_force_dt(const PointSet& p) {
  const int n = static_cast<int>(p.size());
  if (n < 3 || n > 16) throw InvalidInput("brute_force_dt: needs 3..16 points");
  Triangulation t;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        Triangle tri{a, b, c};
        const int o = detail::orient2d_sign(p.points[static_cast<std::size_t>(a)], p.points[static_cast<std::size_t>(b)],
                                            p.points[static_cast<std::size_t>(c)]);
        if (o == 0) continue;
        if (o < 0) std::swap(tri[1], tri[2]);
        bool empty = true;
        for (int d = 0; d < n && empty; ++d) {
          if (d == a || d == b || d == c) continue;
          const int s = detail::incircle_sign(p.points[static_cast<std::size_t>(tri[0])], p.points[static_cast<std::size_t>(tri[1])],
                                              p.points[static_cast<std::size_t>(tri[2])], p.points[static_cast<std::size_t>(d)]);
          if (s == 0) throw DegenerateConfiguration("brute_force_dt: cocircular quadruple");
          empty = s < 0;
        }
        if (empty) t.triangles.push_back({tri[0] + 1, tri[1] + 1, tri[2] + 1});
      }
    }
  }
  return normalized(std::move(t));
}

/// Reads the per-cell diagonals off a full triangulation of a grid.
inline GridCode grid_code_of(int m, const Triangulation& t) {
  auto has = [&](int a, int b, int c) {
    Triangle key{a, b, c};
    const auto it = std::min_element(key.begin(), key.end());
    std::rotate(key.begin(), it, key.end());
    return std::find(t.triangles.begin(), t.triangles.end(), key) != t.triangles.end();
  };
  GridCode code(m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int bl = grid_label(m, i, j), br = grid_label(m, i + 1, j);
      const int tr = grid_label(m, i + 1, j + 1), tl = grid_label(m, i, j + 1);
      if (has(bl, br, tr) && has(bl, tr, tl)) {
        code.at(i, j) = 1;
      } else if (has(bl, br, tl) && has(br, tr, tl)) {
        code.at(i, j) = 0;
      } else {
        throw std::logic_error("grid_code_of: cell is not split by a diagonal");
      }
    }
  }
  return code;
}

}  // namespace degen_dt
