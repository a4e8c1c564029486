#include <gtest/gtest.h>

#include <cmath>

#include "ewgame/geometry.hpp"

using namespace ewgame;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST(Project, examples) {
  const Projection bell = project(bell_psi_plus(), diagonal_axes());
  ASSERT_EQ(bell.coords.size(), 3u);
  EXPECT_NEAR(bell.coords[0], 1.0, 1e-12);
  EXPECT_NEAR(bell.coords[1], -1.0, 1e-12);
  EXPECT_NEAR(bell.coords[2], 1.0, 1e-12);
  for (double z : {0.1, 0.5, 0.9}) {
    const Projection p = project(make_werner(z), diagonal_axes());
    EXPECT_NEAR(p.coords[0], z, 1e-12);
    EXPECT_NEAR(p.coords[1], -z, 1e-12);
    EXPECT_NEAR(p.coords[2], z, 1e-12);
  }
  for (double c : project(maximally_mixed(4), diagonal_axes()).coords) EXPECT_NEAR(c, 0.0, 1e-15);
  EXPECT_THROW(project(bell_psi_plus(), Axes{{1, 4}}), Error);
  EXPECT_THROW(project(bell_psi_plus(), Axes{{1}}), Error);
  EXPECT_THROW(project(bell_psi_plus(), Axes{}), Error);
}

TEST(RangeModel, vertex_lists) {
  const RangeModel m3 = range_model(3);
  EXPECT_EQ(m3.full_vertices, (std::vector<Point>{{1, -1, 1}, {-1, 1, 1}, {1, 1, -1}, {-1, -1, -1}}));
  EXPECT_EQ(m3.separable_vertices.size(), 6u);
  for (const Point& v : m3.separable_vertices) {
    EXPECT_DOUBLE_EQ(std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]), 1.0);
    EXPECT_TRUE(in_full_range(v));
  }
  EXPECT_EQ(m3.full_edges.size(), 6u);
  EXPECT_EQ(m3.separable_edges.size(), 12u);

  const RangeModel m2 = range_model(2);
  EXPECT_EQ(m2.full_vertices.size(), 4u);
  for (const Point& v : m2.separable_vertices) EXPECT_TRUE(in_full_range(v));
  EXPECT_THROW(range_model(4), Error);
}

TEST(RangeModel, separable_projections_lie_in_diamond) {
  Rng rng(1);
  for (int k = 0; k < 10000; ++k) {
    const DensityMatrix s = random_separable(rng, 1 + k % 3);
    ASSERT_TRUE(in_separable_range(project(s, chsh_axes()).coords));
    ASSERT_TRUE(in_separable_range(project(s, diagonal_axes()).coords));
  }
}

TEST(RangeModel, all_states_lie_in_full_range) {
  Rng rng(2);
  for (int k = 0; k < 2000; ++k) {
    const DensityMatrix rho = random_density_matrix(rng, 4);
    ASSERT_TRUE(in_full_range(project(rho, diagonal_axes()).coords));
    ASSERT_TRUE(in_full_range(project(rho, chsh_axes()).coords));
  }
}

TEST(BellDiagonal, ppt_iff_inside_octahedron) {
  Rng rng(3);
  int inside = 0;
  for (int k = 0; k < 10000; ++k) {
    const DensityMatrix rho = random_bell_diagonal(rng);
    const Point p = project(rho, diagonal_axes()).coords;
    const double l1 = std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]);
    if (std::abs(l1 - 1.0) < 1e-9) continue;  // boundary, either answer is rounding
    const bool ppt = min_partial_transpose_eigenvalue(rho) >= 0.0;
    ASSERT_EQ(ppt, l1 < 1.0) << l1;
    inside += ppt ? 1 : 0;
  }
  EXPECT_GT(inside, 100);
  EXPECT_LT(inside, 9900);
}

TEST(WernerLineIntersection, thresholds) {
  EXPECT_NEAR(werner_line_intersection(werner_witness()), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(werner_line_intersection(fixed_chsh_witness()), kSqrt2 / 2.0, 1e-12);
  EXPECT_NEAR(werner_line_intersection(strengthened_chsh_witness()), 0.5, 1e-12);
  PauliWeights flat(2);
  flat[flat_index({1, 2})] = 1.0;  // XY has zero Werner expectation
  EXPECT_THROW(werner_line_intersection(Witness::from_weights(flat)), Error);
}

TEST(Hyperplane, signed_distance_equals_payoff) {
  const Witness w = werner_witness();
  const Hyperplane h = hyperplane_of(w, diagonal_axes());
  EXPECT_NEAR(h.norm(), 1.0, 1e-15);
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const DensityMatrix rho = k % 2 ? random_density_matrix(rng, 4) : random_bell_diagonal(rng);
    EXPECT_NEAR(expected_payoff(rho, w), h.signed_distance(project(rho, diagonal_axes()).coords), 1e-10);
  }
  EXPECT_THROW(hyperplane_of(w, chsh_axes()), Error);  // YY weight is outside the plane
}

TEST(ExportFigure, fig2_contents) {
  const FigureData fd = export_figure_data(Figure::kDiagonal3d, 11);
  EXPECT_EQ(fd.axis_names, (std::vector<std::string>{"XX", "YY", "ZZ"}));
  EXPECT_EQ(fd.series("tetrahedron").size(), 12u);
  EXPECT_EQ(fd.series("octahedron").size(), 24u);
  const auto plane = fd.series("hyperplane");
  ASSERT_GT(plane.size(), 3u);
  for (const auto& r : plane) {
    EXPECT_NEAR(r.coords[0] - r.coords[1] + r.coords[2], 1.0, 1e-10);
    EXPECT_TRUE(in_full_range(r.coords));
  }
  const auto line = fd.series("werner_line");
  ASSERT_EQ(line.size(), 11u);
  EXPECT_NEAR(line.front().coords[0], 0.0, 1e-12);
  EXPECT_NEAR(line.back().coords[0], 1.0, 1e-12);
  EXPECT_NEAR(line.back().coords[1], -1.0, 1e-12);
  EXPECT_NEAR(line.back().coords[2], 1.0, 1e-12);
  const auto hit = fd.series("intersection");
  ASSERT_EQ(hit.size(), 1u);
  EXPECT_NEAR(hit[0].z, 1.0 / 3.0, 1e-12);
}

TEST(ExportFigure, fig3_contents) {
  const FigureData fd = export_figure_data(Figure::kChsh2d, 7);
  EXPECT_EQ(fd.axis_names, (std::vector<std::string>{"XX", "ZZ"}));
  int chsh_points = 0;
  for (const auto& r : fd.series("hyperplane")) {
    if (r.id == 0) {
      EXPECT_NEAR(r.coords[0] + r.coords[1], kSqrt2, 1e-10);
      ++chsh_points;
    } else {
      EXPECT_NEAR(r.coords[0] + r.coords[1], 1.0, 1e-10);
    }
  }
  EXPECT_EQ(chsh_points, 7);
  const auto hits = fd.series("intersection");
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_NEAR(hits[0].z, kSqrt2 / 2, 1e-12);
  EXPECT_NEAR(hits[1].z, 0.5, 1e-12);
  EXPECT_THROW(export_figure_data(Figure::kChsh2d, 1), Error);
  EXPECT_THROW(parse_figure("fig4"), Error);
}
