#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "ulab/norms.hpp"

using namespace ulab;

namespace {

FpPoint pt(std::vector<int> c) { return FpPoint{std::move(c)}; }

FpPoint random_nonzero(const FieldConfig& cfg, std::mt19937_64& rng) {
  while (true) {
    FpPoint x = cfg.point(static_cast<Index>(rng() % cfg.order()));
    if (!x.is_zero()) return x;
  }
}

std::vector<oracle::Point> raw(const Subgroup& h) {
  std::vector<oracle::Point> out;
  for (Index x : h.elements()) out.push_back(h.cfg().point(x).coords);
  return out;
}

GroupFunction quadratic_phase(const FieldConfig& cfg) {
  return GroupFunction::from(cfg, [&](const FpPoint& x) { return cfg.ep(x.coords[0] * x.coords[0]); });
}

}  // namespace

TEST(Norms, DerivativeExamples) {
  FieldConfig cfg(5, 1);
  const auto f = random_one_bounded(cfg, 1, Disk{});
  const auto d0 = mult_derivative(f, pt({0}));
  for (Index x = 0; x < 5; ++x) EXPECT_NEAR(std::abs(d0[x] - std::norm(f[x])), 0, 1e-15);

  const auto lin = GroupFunction::from(cfg, [&](const FpPoint& x) { return cfg.ep(x.coords[0]); });
  const auto dlin = mult_derivative(lin, pt({1}));
  for (auto v : dlin.values()) EXPECT_NEAR(std::abs(v - cfg.ep(-1)), 0, 1e-12);

  const auto quad = quadratic_phase(cfg);
  const auto dd = mult_derivative(mult_derivative(quad, pt({1})), pt({2}));
  for (auto v : dd.values()) EXPECT_NEAR(std::abs(v - cfg.ep(4)), 0, 1e-12);
}

TEST(Norms, BoxNormExamples) {
  FieldConfig cfg(5, 1);
  const auto one = GroupFunction::constant(cfg, 1.0);
  EXPECT_NEAR(box_norm(one, directions(cfg, {pt({1}), pt({2}), pt({3})})), 1.0, 1e-12);
  const auto lin = GroupFunction::from(cfg, [&](const FpPoint& x) { return cfg.ep(x.coords[0]); });
  EXPECT_NEAR(gowers_norm(lin, pt({1}), 1), 0.0, 1e-6);
  EXPECT_NEAR(gowers_norm(quadratic_phase(cfg), pt({1}), 2), std::pow(5.0, -0.25), 1e-9);
  EXPECT_NEAR(std::pow(5.0, -0.25), 0.668740, 1e-6);
}

TEST(Norms, GowersExamples) {
  FieldConfig cfg(5, 1);
  const auto lin = GroupFunction::from(cfg, [&](const FpPoint& x) { return cfg.ep(x.coords[0]); });
  EXPECT_NEAR(gowers_norm(lin, pt({1}), 2), 1.0, 1e-9);
  EXPECT_NEAR(gowers_norm(quadratic_phase(cfg), pt({1}), 3), 1.0, 1e-9);
  EXPECT_THROW(gowers_norm(lin, pt({0}), 2), Error);

  // For a v-invariant indicator every U^s average is its density.
  FieldConfig plane(5, 2);
  const auto stripe = GroupFunction::from(plane, [](const FpPoint& x) { return x.coords[1] < 2 ? 1.0 : 0.0; });
  EXPECT_NEAR(gowers_average(stripe, pt({1, 0}), 1), stripe.mean().real(), 1e-12);
  EXPECT_NEAR(gowers_average(stripe, pt({1, 0}), 3), stripe.mean().real(), 1e-12);
}

TEST(Norms, BoxAverageMatchesOracle) {
  for (int p : {3, 5}) {
    for (int d : {1, 2}) {
      FieldConfig cfg(p, d);
      oracle::Space sp{p, d};
      std::mt19937_64 rng(static_cast<std::uint64_t>(100 * p + d));
      for (int trial = 0; trial < 6; ++trial) {
        const int s = 1 + trial % 3;
        DirectionSpec dirs;
        std::vector<std::vector<oracle::Point>> groups;
        for (int i = 0; i < s; ++i) {
          const Subgroup h = (trial % 2 == 0 || d == 1) ? cyclic(cfg, random_nonzero(cfg, rng))
                                                        : subgroup_span(cfg, {random_nonzero(cfg, rng), random_nonzero(cfg, rng)});
          dirs.push_back(h);
          groups.push_back(raw(h));
        }
        const auto f = random_one_bounded(cfg, rng(), trial % 2 ? FunctionKind{Disk{}} : FunctionKind{UnitPhase{}});
        const double expect = oracle::box_average(sp, f.values(), groups);
        EXPECT_NEAR(box_average(f, dirs), expect, 1e-9);
        EXPECT_NEAR(box_average_direct(f, dirs), expect, 1e-9);
        EXPECT_NEAR(box_norm(f, dirs), box_norm_direct(f, dirs), 1e-9);
      }
    }
  }
}

TEST(Norms, Properties) {
  FieldConfig cfg(5, 2);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_one_bounded(cfg, rng(), UnitPhase{});
    const Subgroup h1 = cyclic(cfg, random_nonzero(cfg, rng));
    const Subgroup h2 = cyclic(cfg, random_nonzero(cfg, rng));
    const Subgroup h3 = subgroup_span(cfg, {random_nonzero(cfg, rng), random_nonzero(cfg, rng)});

    // monotonicity
    const double a = box_norm(f, {h1});
    const double b = box_norm(f, {h1, h2});
    const double c = box_norm(f, {h1, h2, h3});
    EXPECT_LE(a, b + 1e-9);
    EXPECT_LE(b, c + 1e-9);

    // subgroups: shrinking a group can only raise the norm
    const Subgroup big = subgroup_sum(h1, h3);
    EXPECT_LE(box_norm(f, {big, h2}), box_norm(f, {h1, h2}) + 1e-9);

    // inductive formula
    double avg = 0;
    for (Index h : h1.elements()) avg += box_average(mult_derivative(f, h), {h2, h3});
    EXPECT_NEAR(box_average(f, {h1, h2, h3}), avg / static_cast<double>(h1.size()), 1e-9);

    // permutation invariance
    EXPECT_NEAR(box_norm(f, {h1, h2, h3}), box_norm(f, {h3, h1, h2}), 1e-9);

    // triangle inequality for s = 2
    const auto g = random_one_bounded(cfg, rng(), Disk{});
    const auto sum = linear_combination(0.5, f, 0.5, g);
    EXPECT_LE(box_norm(sum, {h1, h2}), 0.5 * box_norm(f, {h1, h2}) + 0.5 * box_norm(g, {h1, h2}) + 1e-9);
  }
}

TEST(Norms, GowersCauchySchwarz) {
  FieldConfig cfg(5, 1);
  const DirectionSpec dirs = directions(cfg, {pt({1}), pt({2})});
  const auto f = random_one_bounded(cfg, 3, UnitPhase{});
  const auto eq = gcs_check(std::vector<GroupFunction>(4, f), dirs);
  EXPECT_NEAR(eq.lhs, std::pow(box_norm(f, dirs), 4), 1e-9);
  EXPECT_NEAR(eq.lhs, eq.rhs, 1e-9);
  EXPECT_TRUE(eq.holds);

  std::vector<GroupFunction> with_zero(4, f);
  with_zero[2] = GroupFunction::constant(cfg, 0.0);
  const auto z = gcs_check(with_zero, dirs);
  EXPECT_NEAR(z.lhs, 0, 1e-12);
  EXPECT_NEAR(z.rhs, 0, 1e-12);

  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    std::vector<GroupFunction> fs;
    for (std::uint64_t k = 0; k < 4; ++k) fs.push_back(random_one_bounded(cfg, seed * 10 + k, UnitPhase{}));
    const auto r = gcs_check(fs, dirs);
    EXPECT_TRUE(r.holds) << r.lhs << " > " << r.rhs;
    EXPECT_NEAR(r.lhs, std::abs(box_inner_product(fs, dirs)), 1e-12);
  }
  EXPECT_THROW(gcs_check({f, f, f}, dirs), Error);
}

TEST(Norms, DualFunction) {
  FieldConfig cfg(5, 2);
  const FpPoint v = pt({1, 2});
  const auto f = random_one_bounded(cfg, 8, Disk{});
  const auto d1 = dual_function(f, v, 1);
  const auto ce = conditional_expectation(f.conj(), cyclic(cfg, v));
  for (Index x = 0; x < cfg.order(); ++x) EXPECT_NEAR(std::abs(d1[x] - ce[x]), 0, 1e-12);

  const auto dual_one = dual_function(GroupFunction::constant(cfg, 1.0), v, 3);
  for (auto z : dual_one.values()) EXPECT_NEAR(std::abs(z - 1.0), 0, 1e-12);
  EXPECT_THROW(dual_function(f, pt({0, 0}), 2), Error);

  FieldConfig line(5, 1);
  const auto quad = quadratic_phase(line);
  const auto d2 = dual_function(quad, pt({1}), 2);
  Complex corr = 0;
  for (Index x = 0; x < 5; ++x) corr += quad[x] * d2[x];
  EXPECT_NEAR(std::abs(corr / 5.0 - 0.2), 0, 1e-9);
}

TEST(Norms, WeakInverse) {
  FieldConfig line(5, 1);
  const auto one = weak_inverse_check(GroupFunction::constant(line, 1.0), pt({1}), 2);
  EXPECT_NEAR(one.lhs, 1.0, 1e-12);
  EXPECT_TRUE(one.ok);
  const auto lin = GroupFunction::from(line, [&](const FpPoint& x) { return line.ep(x.coords[0]); });
  const auto l = weak_inverse_check(lin, pt({1}), 2);
  EXPECT_NEAR(l.lhs, 1.0, 1e-9);
  EXPECT_NEAR(std::abs(l.rhs - 1.0), 0, 1e-9);

  std::mt19937_64 rng(17);
  for (int p : {5, 7})
    for (int d : {1, 2})
      for (int s : {1, 2, 3}) {
        FieldConfig cfg(p, d);
        for (int k = 0; k < 2; ++k) {
          const auto r = weak_inverse_check(random_one_bounded(cfg, rng(), UnitPhase{}), random_nonzero(cfg, rng), s);
          EXPECT_TRUE(r.ok) << p << " " << d << " " << s;
          EXPECT_LE(std::abs(r.rhs.imag()), 1e-9);
        }
      }
}

TEST(Norms, Transversal) {
  FieldConfig cfg(5, 2);
  const auto t = transversal(cfg, pt({1, 0}));
  ASSERT_EQ(t.size(), 5u);
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_EQ(cfg.point(t[k]).coords, (std::vector<int>{0, static_cast<int>(k)}));
  const auto diag = transversal(cfg, pt({1, 1}));
  ASSERT_EQ(diag.size(), 5u);
  for (std::size_t k = 0; k < diag.size(); ++k) EXPECT_EQ(cfg.point(diag[k]).coords, (std::vector<int>{0, static_cast<int>(k)}));
}

TEST(Norms, EigenfunctionExamples) {
  FieldConfig cfg(5, 2);
  const FpPoint v = pt({1, 0});
  const auto e = make_eigenfunction(cfg, v, {0, 1, 2, 3, 4}, {0, 0, 0, 0, 0}, 1.0, std::vector<bool>(5, true));
  EXPECT_TRUE(eigen_defects(e).ok());
  for (Index x = 0; x < cfg.order(); ++x) {
    const auto c = cfg.point(x).coords;
    EXPECT_NEAR(std::abs(e.chi[x] - cfg.ep(c[0] * c[1])), 0, 1e-12);
  }
  const auto proj = conditional_expectation(e.chi, cyclic(cfg, v));
  for (Index x = 0; x < cfg.order(); ++x) {
    const Complex expect = e.phi[x] == 0 ? e.chi[x] : Complex(0, 0);
    EXPECT_NEAR(std::abs(proj[x] - expect), 0, 1e-9);
  }

  const auto flat = make_eigenfunction(cfg, v, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, 1.0, std::vector<bool>(5, true));
  for (auto z : flat.chi.values()) EXPECT_NEAR(std::abs(z - 1.0), 0, 1e-12);
  EXPECT_THROW(make_eigenfunction(cfg, v, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, 2.0, std::vector<bool>(5, true)), Error);
  EXPECT_THROW(make_eigenfunction(cfg, pt({0, 0}), {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, 1.0, std::vector<bool>(5, true)), Error);

  const auto partial = make_eigenfunction(cfg, v, {1, 2, 0, 4, 3}, {2, 0, 1, 1, 0}, std::polar(1.0, 0.3),
                                          {true, false, true, false, true});
  EXPECT_TRUE(eigen_defects(partial).ok());
}

TEST(Norms, ProjectionOfEigenfunctions) {
  std::mt19937_64 rng(23);
  for (int p : {5, 7}) {
    FieldConfig cfg(p, 2);
    for (int trial = 0; trial < 10; ++trial) {
      const FpPoint v = random_nonzero(cfg, rng);
      const std::size_t cosets = cfg.order() / static_cast<std::size_t>(p);
      std::vector<int> phi, psi;
      std::vector<bool> support;
      for (std::size_t k = 0; k < cosets; ++k) {
        phi.push_back(static_cast<int>(rng() % static_cast<unsigned>(p)));
        psi.push_back(static_cast<int>(rng() % static_cast<unsigned>(p)));
        support.push_back(rng() % 4 != 0);
      }
      const auto e = make_eigenfunction(cfg, v, phi, psi, std::polar(1.0, 0.7), support);
      ASSERT_TRUE(eigen_defects(e).ok());
      const auto proj = conditional_expectation(e.chi, cyclic(cfg, v));
      for (Index x = 0; x < cfg.order(); ++x) {
        const Complex expect = e.phi[x] == 0 ? e.chi[x] : Complex(0, 0);
        EXPECT_NEAR(std::abs(proj[x] - expect), 0, 1e-9);
      }
    }
  }
}

TEST(Norms, U2Inverse) {
  FieldConfig cfg(5, 2);
  const FpPoint v = pt({1, 0});
  const auto e = make_eigenfunction(cfg, v, {3, 1, 4, 1, 0}, {2, 2, 0, 1, 3}, 1.0, std::vector<bool>(5, true));
  const auto self = u2_inverse(e.chi, v);
  EXPECT_NEAR(self.correlation, 1.0, 1e-9);
  for (Index x = 0; x < cfg.order(); ++x) EXPECT_NEAR(std::abs(self.chi.chi[x] - std::conj(e.chi[x])), 0, 1e-9);

  const auto zero = u2_inverse(GroupFunction::constant(cfg, 0.0), v);
  EXPECT_NEAR(zero.correlation, 0.0, 1e-12);
  EXPECT_THROW(u2_inverse(e.chi, pt({0, 0})), Error);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_one_bounded(cfg, rng(), UnitPhase{});
    const FpPoint u = trial == 0 ? v : random_nonzero(cfg, rng);
    const auto r = u2_inverse(f, u);
    EXPECT_TRUE(eigen_defects(r.chi).ok());
    for (auto z : r.chi.chi.values()) EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
    EXPECT_GE(r.correlation, std::pow(gowers_norm(f, u, 2), 4) - 1e-9);
    const auto local = conditional_expectation(multiply(f, r.chi.chi), cyclic(cfg, u));
    for (auto z : local.values()) {
      EXPECT_GE(z.real(), -1e-9);
      EXPECT_NEAR(z.imag(), 0, 1e-9);
    }
  }
}
