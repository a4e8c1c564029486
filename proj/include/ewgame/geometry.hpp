#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ewgame/pauli.hpp"
#include "ewgame/state.hpp"
#include "ewgame/witness.hpp"

namespace ewgame {

using Point = std::vector<double>;
using Axes = std::vector<std::vector<PauliIndex>>;

/// (XX, YY, ZZ)
inline Axes diagonal_axes() { return {{1, 1}, {2, 2}, {3, 3}}; }
/// (XX, ZZ)
inline Axes chsh_axes() { return {{1, 1}, {3, 3}}; }

struct Projection {
  Axes axes;
  Point coords;  // coords[k] = Tr(rho sigma_{axes[k]})
};

inline void check_axes(const Axes& axes, int qubits) {
  if (axes.empty()) throw Error("projection needs at least one axis");
  for (const auto& a : axes) {
    if (static_cast<int>(a.size()) != qubits) throw Error("axis label tuple does not match the state's qubit count");
    check_labels(a);
  }
}

inline Projection project(const DensityMatrix& rho, const Axes& axes) {
  check_axes(axes, rho.qubits());
  const CorrelationTable r = pauli_coefficients(rho);
  Projection p{axes, {}};
  for (const auto& a : axes) p.coords.push_back(r[flat_index(a)]);
  return p;
}

using Edge = std::pair<int, int>;

/// Vertex/edge description of the attainable region (full) and the
/// separable region inside a 2- or 3-dimensional correlation subspace.
struct RangeModel {
  int dimension = 3;
  std::vector<Point> full_vertices;
  std::vector<Edge> full_edges;
  std::vector<Point> separable_vertices;
  std::vector<Edge> separable_edges;
};

/// 3: tetrahedron and octahedron over (XX, YY, ZZ). 2: square and diamond over (XX, ZZ).
inline RangeModel range_model(int dimension) {
  RangeModel m;
  m.dimension = dimension;
  if (dimension == 3) {
    m.full_vertices = {{1, -1, 1}, {-1, 1, 1}, {1, 1, -1}, {-1, -1, -1}};
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) m.full_edges.emplace_back(i, j);
    m.separable_vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    // every pair except the three antipodal ones
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        if (i / 2 != j / 2) m.separable_edges.emplace_back(i, j);
  } else if (dimension == 2) {
    m.full_vertices = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    m.separable_vertices = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int i = 0; i < 4; ++i) {
      m.full_edges.emplace_back(i, (i + 1) % 4);
      m.separable_edges.emplace_back(i, (i + 1) % 4);
    }
  } else {
    throw Error("range model dimension must be 2 or 3, got " + std::to_string(dimension));
  }
  return m;
}

/// Membership in the full range: tetrahedron |facets| or square.
inline bool in_full_range(const Point& p, double tol = 1e-9) {
  if (p.size() == 2) return std::abs(p[0]) <= 1 + tol && std::abs(p[1]) <= 1 + tol;
  if (p.size() != 3) throw Error("full range is defined for 2 or 3 coordinates");
  const double x = p[0], y = p[1], z = p[2];
  // Facets of conv{(1,-1,1), (-1,1,1), (1,1,-1), (-1,-1,-1)}.
  return x + y + z <= 1 + tol && x - y - z <= 1 + tol && -x + y - z <= 1 + tol && -x - y + z <= 1 + tol;
}

/// Membership in the separable range: |x| + |y| (+ |z|) <= 1.
inline bool in_separable_range(const Point& p, double tol = 1e-9) {
  double s = 0.0;
  for (double c : p) s += std::abs(c);
  return s <= 1 + tol;
}

/// Tr(rho W) = 0 written in subspace coordinates: normal . r + offset = 0.
struct Hyperplane {
  Axes axes;
  Point normal;
  double offset = 0.0;

  double evaluate(const Point& r) const {
    double v = offset;
    for (std::size_t k = 0; k < normal.size(); ++k) v += normal[k] * r[k];
    return v;
  }

  double norm() const {
    double s = 0.0;
    for (double x : normal) s += x * x;
    return std::sqrt(s);
  }

  /// Euclidean distance, positive on the side where the payoff -Tr(rho W) is positive.
  double signed_distance(const Point& r) const { return -evaluate(r) / norm(); }
};

/// Normal from the witness weights on `axes`, offset from the identity weight.
/// Throws if the witness has weight outside the subspace.
inline Hyperplane hyperplane_of(const Witness& w, const Axes& axes) {
  check_axes(axes, w.qubits());
  const PauliWeights& wt = w.weights();
  Hyperplane h{axes, {}, wt[0]};
  std::vector<bool> used(static_cast<std::size_t>(wt.size()), false);
  used[0] = true;
  for (const auto& a : axes) {
    const int i = flat_index(a);
    h.normal.push_back(wt[i]);
    used[static_cast<std::size_t>(i)] = true;
  }
  for (int i = 0; i < wt.size(); ++i) {
    if (!used[static_cast<std::size_t>(i)] && std::abs(wt[i]) > 1e-12) {
      throw Error("witness has weight on " + label_name(labels_of(i, w.qubits())) + ", outside the projection subspace");
    }
  }
  if (h.norm() == 0.0) throw Error("witness has no weight inside the projection subspace");
  return h;
}

/// z at which -Tr(rho_z W) vanishes along the Werner family; the payoff is
/// affine in z, so two evaluations fix it.
inline double werner_line_intersection(const Witness& w) {
  const double p0 = expected_payoff(make_werner(0.0), w);
  const double p1 = expected_payoff(make_werner(1.0), w);
  const double slope = p1 - p0;
  if (std::abs(slope) <= 1e-14 * std::max({1.0, std::abs(p0), std::abs(p1)})) {
    throw Error("payoff is constant along the Werner line; no intersection");
  }
  return -p0 / slope;
}

enum class Figure { kDiagonal3d, kChsh2d };

inline Figure parse_figure(const std::string& id) {
  if (id == "fig2") return Figure::kDiagonal3d;
  if (id == "fig3") return Figure::kChsh2d;
  throw Error("unknown figure id '" + id + "' (expected fig2 or fig3)");
}

struct FigureRow {
  std::string series;
  int id = 0;
  Point coords;
  double z = std::numeric_limits<double>::quiet_NaN();  // Werner parameter where meaningful
};

struct FigureData {
  std::string figure;
  std::vector<std::string> axis_names;
  std::vector<FigureRow> rows;

  std::vector<FigureRow> series(const std::string& name) const {
    std::vector<FigureRow> out;
    for (const auto& r : rows)
      if (r.series == name) out.push_back(r);
    return out;
  }
};

namespace detail {

inline Point lerp(const Point& a, const Point& b, double t) {
  Point out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + t * (b[k] - a[k]);
  return out;
}

/// Points where the hyperplane meets the polytope's edges, deduplicated.
inline std::vector<Point> section_points(const Hyperplane& h, const std::vector<Point>& verts, const std::vector<Edge>& edges) {
  std::vector<Point> pts;
  auto push = [&](const Point& p) {
    for (const auto& q : pts) {
      double d = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) d = std::max(d, std::abs(p[k] - q[k]));
      if (d < 1e-12) return;
    }
    pts.push_back(p);
  };
  for (const auto& [i, j] : edges) {
    const Point& a = verts[static_cast<std::size_t>(i)];
    const Point& b = verts[static_cast<std::size_t>(j)];
    const double fa = h.evaluate(a), fb = h.evaluate(b);
    if (std::abs(fa) < 1e-12) push(a);
    if (std::abs(fb) < 1e-12) push(b);
    if ((fa < 0) != (fb < 0) && std::abs(fa - fb) > 1e-15) {
      Point p = lerp(a, b, fa / (fa - fb));
      // Snap onto the plane exactly along the normal.
      const double err = h.evaluate(p);
      const double nn = h.norm() * h.norm();
      for (std::size_t k = 0; k < p.size(); ++k) p[k] -= err * h.normal[k] / nn;
      push(p);
    }
  }
  return pts;
}

/// Evenly spaced points on the segment (2D) or a triangulated grid over the
/// convex section polygon (3D).
inline std::vector<Point> sample_section(const Hyperplane& h, std::vector<Point> pts, int resolution) {
  std::vector<Point> out;
  if (pts.size() < 2) return out;
  const double step = 1.0 / (resolution - 1);
  if (pts.front().size() == 2 || pts.size() == 2) {
    for (int i = 0; i < resolution; ++i) out.push_back(lerp(pts[0], pts[1], i * step));
    return out;
  }
  // Order the section polygon by angle around its centroid in the plane.
  Point c(3, 0.0);
  for (const auto& p : pts)
    for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k)] / pts.size();
  Point u(3), v(3);
  for (int k = 0; k < 3; ++k) u[static_cast<std::size_t>(k)] = pts[0][static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(k)];
  const Point& n = h.normal;
  v = {n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};
  auto angle = [&](const Point& p) {
    double pu = 0, pv = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      pu += (p[k] - c[k]) * u[k];
      pv += (p[k] - c[k]) * v[k];
    }
    return std::atan2(pv, pu);
  };
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) { return angle(a) < angle(b); });
  for (std::size_t t = 1; t + 1 < pts.size(); ++t) {
    const Point& a = pts[0];
    const Point& b = pts[t];
    const Point& d = pts[t + 1];
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; i + j < resolution; ++j) {
        Point p(3);
        for (std::size_t k = 0; k < 3; ++k) p[k] = a[k] + i * step * (b[k] - a[k]) + j * step * (d[k] - a[k]);
        out.push_back(p);
      }
  }
  return out;
}

inline void emit_edges(FigureData& fd, const std::string& series, const std::vector<Point>& verts,
                       const std::vector<Edge>& edges) {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    fd.rows.push_back({series, static_cast<int>(e), verts[static_cast<std::size_t>(edges[e].first)], std::nan("")});
    fd.rows.push_back({series, static_cast<int>(e), verts[static_cast<std::size_t>(edges[e].second)], std::nan("")});
  }
}

}  // namespace detail

/// Plot data for the diagonal-correlation (3D) or CHSH-plane (2D) picture.
///
/// Series: polytope edges as point pairs sharing an id, sampled witness
/// hyperplanes, the Werner segment and its crossing points with each hyperplane.
inline FigureData export_figure_data(Figure which, int resolution) {
  if (resolution < 2) throw Error("figure resolution must be >= 2");
  const bool three_d = which == Figure::kDiagonal3d;
  const Axes axes = three_d ? diagonal_axes() : chsh_axes();
  const RangeModel model = range_model(three_d ? 3 : 2);

  FigureData fd;
  fd.figure = three_d ? "fig2" : "fig3";
  for (const auto& a : axes) fd.axis_names.push_back(label_name(a));

  detail::emit_edges(fd, three_d ? "tetrahedron" : "square", model.full_vertices, model.full_edges);
  detail::emit_edges(fd, three_d ? "octahedron" : "separable_square", model.separable_vertices, model.separable_edges);

  const std::vector<Witness> witnesses =
      three_d ? std::vector<Witness>{werner_witness()}
              : std::vector<Witness>{fixed_chsh_witness(), strengthened_chsh_witness()};
  for (std::size_t k = 0; k < witnesses.size(); ++k) {
    const Hyperplane h = hyperplane_of(witnesses[k], axes);
    const auto pts = detail::section_points(h, model.full_vertices, model.full_edges);
    for (const Point& p : detail::sample_section(h, pts, resolution))
      fd.rows.push_back({"hyperplane", static_cast<int>(k), p, std::nan("")});
  }

  for (int i = 0; i < resolution; ++i) {
    const double z = static_cast<double>(i) / (resolution - 1);
    fd.rows.push_back({"werner_line", i, project(make_werner(z), axes).coords, z});
  }
  for (std::size_t k = 0; k < witnesses.size(); ++k) {
    const double z = werner_line_intersection(witnesses[k]);
    fd.rows.push_back({"intersection", static_cast<int>(k), project(make_werner(z), axes).coords, z});
  }
  return fd;
}

}  // namespace ewgame
