#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>

#include "levy/measure.hpp"
#include "levy/quadrature.hpp"
#include "levy/serialize.hpp"

using namespace levy;

namespace {

LevyMeasure atoms1(std::initializer_list<Atom> as) { return LevyMeasure::atomic(1, as); }

LevyMeasure inverse_square_both() {
  // d(x) = |x|^{-2} on 0 < |x| <= 1
  return LevyMeasure::density({1.0, 2.0, 0.0, 1.0, Side::both});
}

bool has_violation(const ValidationReport& r, const std::string& v) {
  for (const auto& s : r.violations)
    if (s == v) return true;
  return false;
}

}  // namespace

// ------------------------------ regions ------------------------------------

TEST_CASE("interval membership honors open/closed endpoints") {
  const auto b = BorelRegion::abs_in(0.25, 1.0, false, true);  // 0.25 < |x| <= 1
  CHECK(b.contains1(0.5));
  CHECK(b.contains1(1.0));
  CHECK(b.contains1(-1.0));
  CHECK_FALSE(b.contains1(0.25));
  CHECK_FALSE(b.contains1(-0.25));
  CHECK_FALSE(b.contains1(0.0));
  CHECK_FALSE(b.contains1(1.5));
  CHECK(b.min_abs() == 0.25);
  CHECK(b.bounded_away_from_zero());
}

TEST_CASE("regions touching the origin report min_abs 0") {
  CHECK(BorelRegion::interval(0.0, 0.25, false, true).min_abs() == 0.0);
  CHECK(BorelRegion::abs_ge(0.0).min_abs() == 0.0);
  CHECK(BorelRegion::abs_ge(1.0).min_abs() == 1.0);
  CHECK(BorelRegion::ray_ge(1.0).min_abs() == 1.0);
  CHECK(BorelRegion::ray_le(-2.0).min_abs() == 2.0);
}

TEST_CASE("disjointness test is exact in one dimension") {
  const auto pos = BorelRegion::ray_ge(1.0);
  const auto neg = BorelRegion::ray_le(-1.0);
  CHECK_FALSE(pos.intersects(neg));
  CHECK(pos.intersects(BorelRegion::abs_ge(1.0)));
  // shared endpoint: open on one side means no common point
  CHECK_FALSE(BorelRegion::interval(0.0, 1.0, true, false)
                  .intersects(BorelRegion::interval(1.0, 2.0, false, true)));
  CHECK(BorelRegion::interval(0.0, 1.0, true, true)
            .intersects(BorelRegion::interval(1.0, 2.0, true, true)));
}

TEST_CASE("annulus in R^2 with box cut") {
  const auto ann = BorelRegion::annulus(2, 1.0, 2.0, true, true);
  CHECK(ann.contains(Vec{1.5, 0.0}));
  CHECK_FALSE(ann.contains(Vec{0.5, 0.5}));
  const auto cut = ann.with_box(Vec{0.0, -10.0}, Vec{10.0, 10.0});
  CHECK(cut.contains(Vec{1.5, 0.0}));
  CHECK_FALSE(cut.contains(Vec{-1.5, 0.0}));
}

// ---------------------------- validation -----------------------------------

TEST_CASE("pure Brownian triplet is valid") {
  const auto t = LevyTriplet::scalar(0.0, 1.0, LevyMeasure::none(1));
  CHECK(validate_triplet(t).ok());
}

TEST_CASE("negative covariance is rejected with the named violation") {
  const auto t = LevyTriplet::scalar(0.0, -1.0, LevyMeasure::none(1));
  const auto r = validate_triplet(t);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, "covariance not PSD"));
}

TEST_CASE("inverse-square density on (0,1] is valid and has second moment 2") {
  auto t = LevyTriplet::scalar(0.0, 0.0, inverse_square_both());
  CHECK(validate_triplet(t).ok());
  const auto q =
      nu_integral(t.measure, [](const Vec& x) { return x[0] * x[0]; }, BorelRegion::abs_ge(0.0));
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("structural violations are individually named") {
  LevyTriplet t = LevyTriplet::scalar(std::numeric_limits<double>::infinity(), 1.0,
                                      LevyMeasure::none(1));
  CHECK(has_violation(validate_triplet(t), "drift not finite"));

  LevyTriplet asym;
  asym.drift = Vec::zero(2);
  asym.covariance = Mat::from_rows({{1.0, 0.5}, {0.4, 1.0}});
  asym.measure = LevyMeasure::none(2);
  CHECK(has_violation(validate_triplet(asym), "covariance not symmetric"));

  LevyTriplet indef;
  indef.drift = Vec::zero(2);
  indef.covariance = Mat::from_rows({{1.0, 2.0}, {2.0, 1.0}});
  indef.measure = LevyMeasure::none(2);
  CHECK(has_violation(validate_triplet(indef), "covariance not PSD"));

  // rank-deficient but PSD is fine
  LevyTriplet rank1;
  rank1.drift = Vec::zero(2);
  rank1.covariance = Mat::from_rows({{1.0, 1.0}, {1.0, 1.0}});
  rank1.measure = LevyMeasure::none(2);
  CHECK(validate_triplet(rank1).ok());

  const auto bad_atom = LevyTriplet::scalar(0.0, 0.0, atoms1({{Vec(0.0), 1.0}}));
  CHECK(has_violation(validate_triplet(bad_atom), "atom at the origin"));
  const auto bad_mass = LevyTriplet::scalar(0.0, 0.0, atoms1({{Vec(1.0), 0.0}}));
  CHECK(has_violation(validate_triplet(bad_mass), "atom mass not positive"));

  const auto mixed_dim = LevyTriplet{Vec::zero(2), Mat::identity(2), LevyMeasure::none(1)};
  CHECK(has_violation(validate_triplet(mixed_dim), "measure dimension mismatch"));
}

TEST_CASE("ensure_valid throws with the violation list in the message") {
  const auto t = LevyTriplet::scalar(0.0, -1.0, LevyMeasure::none(1));
  CHECK_THROWS_AS(ensure_valid(t), ValidationError);
  try {
    ensure_valid(t);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("covariance not PSD") != std::string::npos);
  }
}

// ---------------------------- nu_integral ----------------------------------

TEST_CASE("atomic integrals are exact sums over atoms inside the region") {
  const auto m = atoms1({{Vec(2.0), 3.0}});
  const auto q = nu_integral(m, [](const Vec& x) { return x[0]; }, BorelRegion::ray_ge(1.0));
  CHECK(q.value == 6.0);
  CHECK(q.abs_error == 0.0);
}

TEST_CASE("atoms outside the region do not contribute") {
  const auto m = atoms1({{Vec(2.0), 3.0}, {Vec(-0.5), 1.0}});
  const auto q =
      nu_integral(m, [](const Vec& x) { return x[0] * x[0]; }, BorelRegion::abs_ge(1.0));
  CHECK(q.value == 12.0);
}

TEST_CASE("inverse-square density: second moment of (0, 0.25] is 0.25") {
  const auto m = LevyMeasure::density({1.0, 2.0, 0.0, 1.0, Side::positive});
  const auto q = nu_integral(m, [](const Vec& x) { return x[0] * x[0]; },
                             BorelRegion::interval(0.0, 0.25, false, true));
  CHECK(q.value == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(q.abs_error <= 1e-6);
}

TEST_CASE("density mass away from the origin matches the closed form") {
  // integral of x^{-2} over [0.25, 1] is 3 per side
  const auto m = inverse_square_both();
  const auto q = nu_integral(m, [](const Vec&) { return 1.0; },
                             BorelRegion::abs_in(0.25, 1.0, true, true));
  CHECK(q.value == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(m.power().piece_mass(0.25, 1.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("non-quadratic integrand on a region touching zero is refused") {
  const auto m = inverse_square_both();
  CHECK_THROWS_AS(nu_integral(m, [](const Vec&) { return 1.0; },
                              BorelRegion::interval(0.0, 0.25, false, true)),
                  std::domain_error);
  CHECK_THROWS_AS(nu_integral(m, [](const Vec& x) { return x[0]; },
                              BorelRegion::abs_ge(0.0)),
                  std::domain_error);
  try {
    nu_mass(m, BorelRegion::abs_ge(0.0));
    CHECK(false);
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("non-integrable") != std::string::npos);
  }
}

TEST_CASE("indicator masses add exactly across disjoint regions (atomic)") {
  const auto m = atoms1({{Vec(2.0), 3.0}, {Vec(-0.5), 1.0}, {Vec(-1.5), 0.25}});
  const double pos = nu_mass(m, BorelRegion::ray_ge(1.0));
  const double neg = nu_mass(m, BorelRegion::ray_le(-1.0));
  const double both = nu_mass(m, BorelRegion::abs_ge(1.0));
  CHECK(pos + neg == both);
  CHECK(both == 3.25);
}

TEST_CASE("narrow density bump converges to the atom it approximates") {
  const double w = 1e-3;
  const auto atom = atoms1({{Vec(0.5), 0.7}});
  const auto bump = LevyMeasure::density({0.7 / (2.0 * w), 0.0, 0.5 - w, 0.5 + w,
                                          Side::positive});
  const auto f = [](const Vec& x) { return x[0] * x[0]; };
  const auto everything = BorelRegion::abs_ge(0.0);
  const double exact = nu_integral(atom, f, everything).value;
  const double approx = nu_integral(bump, f, everything).value;
  CHECK(exact == doctest::Approx(0.175).epsilon(1e-15));
  CHECK(std::abs(approx - exact) <= 1e-4);
}

TEST_CASE("first moment respects the side restriction") {
  const auto m = LevyMeasure::density({1.0, 0.0, 1.0, 2.0, Side::negative});
  // mass sits on [-2,-1]: integral of x dx over [-2,-1] = -1.5
  const auto v = nu_first_moment(m, BorelRegion::abs_ge(1.0));
  CHECK(v[0] == doctest::Approx(-1.5).epsilon(1e-10));
}

// -------------------------------- psi --------------------------------------

TEST_CASE("Brownian exponent is the half quadratic form") {
  const auto t = LevyTriplet::scalar(0.0, 1.0, LevyMeasure::none(1));
  const cd v = psi(t, 2.0);
  CHECK(v.real() == 2.0);
  CHECK(v.imag() == 0.0);
}

TEST_CASE("unit-jump Poisson exponent at u = pi") {
  const auto t = LevyTriplet::scalar(0.0, 0.0, atoms1({{Vec(1.0), 2.0}}));
  const cd v = psi(t, M_PI);
  CHECK(v.real() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(std::abs(v.imag()) <= 1e-12);
}

TEST_CASE("psi vanishes at the origin for every measure variant") {
  const auto atomic = LevyTriplet::scalar(0.7, 2.0, atoms1({{Vec(1.5), 0.3}, {Vec(-0.2), 4.0}}));
  CHECK(psi(atomic, 0.0) == cd(0.0, 0.0));
  const auto dens = LevyTriplet::scalar(-0.3, 0.5, inverse_square_both());
  CHECK(std::abs(psi(dens, 0.0)) == 0.0);
}

TEST_CASE("uniform density on [1,2]: closed-form antiderivative at u = 1") {
  const auto t = LevyTriplet::scalar(
      0.0, 0.0, LevyMeasure::density({1.0, 0.0, 1.0, 2.0, Side::positive}));
  const cd got = psi(t, 1.0);
  // 1 - (e^{2i} - e^{i}) / i, evaluated independently of the quadrature path
  const cd expected = 1.0 - (std::exp(cd(0.0, 2.0)) - std::exp(cd(0.0, 1.0))) / cd(0.0, 1.0);
  CHECK(got.real() == doctest::Approx(expected.real()).epsilon(1e-10));
  CHECK(got.imag() == doctest::Approx(expected.imag()).epsilon(1e-10));
  CHECK(got.real() == doctest::Approx(0.9321735579822148).epsilon(1e-9));
  CHECK(got.imag() == doctest::Approx(-0.9564491424152822).epsilon(1e-9));
}

TEST_CASE("Hermitian symmetry: exact for atoms, 1e-8 relative for densities") {
  const auto atomic = LevyTriplet::scalar(0.4, 1.3, atoms1({{Vec(1.0), 2.0}, {Vec(-0.3), 0.5}}));
  for (double u : {0.3, 1.0, 2.7, 5.5}) {
    const cd p = psi(atomic, u);
    const cd q = psi(atomic, -u);
    CHECK(q.real() == p.real());
    CHECK(q.imag() == -p.imag());
  }
  const auto dens = LevyTriplet::scalar(0.0, 0.0, inverse_square_both());
  for (double u : {0.5, 1.5, 3.0}) {
    const cd p = psi(dens, u);
    const cd q = psi(dens, -u);
    CHECK(std::abs(q - std::conj(p)) <= 1e-8 * (1.0 + std::abs(p)));
  }
}

TEST_CASE("psi is additive over independent-sum triplets") {
  const auto t1 = LevyTriplet::scalar(0.5, 1.0, atoms1({{Vec(1.5), 0.7}}));
  const auto t2 = LevyTriplet::scalar(-0.2, 0.3, atoms1({{Vec(-0.4), 2.0}}));
  const auto sum = LevyTriplet::scalar(0.3, 1.3, atoms1({{Vec(1.5), 0.7}, {Vec(-0.4), 2.0}}));
  for (double u : {0.7, 1.9, -3.1}) {
    const cd lhs = psi(sum, u);
    const cd rhs = psi(t1, u) + psi(t2, u);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("Re psi >= 0 and |char_fn| <= 1 on a u-grid") {
  const auto t = LevyTriplet::scalar(0.3, 0.8, atoms1({{Vec(1.5), 0.4}, {Vec(-0.2), 5.0}}));
  const auto d = LevyTriplet::scalar(-1.0, 0.1, inverse_square_both());
  for (int i = -20; i <= 20; ++i) {
    const double u = 0.37 * i;
    CHECK(psi(t, u).real() >= -1e-12);
    CHECK(std::abs(char_fn(t, u, 1.7)) <= 1.0 + 1e-12);
    CHECK(psi(d, u).real() >= -1e-8);
    CHECK(std::abs(char_fn(d, u, 0.4)) <= 1.0 + 1e-8);
  }
}

TEST_CASE("psi on an invalid triplet propagates the validation error") {
  const auto bad = LevyTriplet::scalar(0.0, -1.0, LevyMeasure::none(1));
  CHECK_THROWS_AS(psi(bad, 1.0), ValidationError);
}

TEST_CASE("atoms on the unit sphere belong to the uncompensated part") {
  // if the atom at |x| = 1 were compensated, psi would gain a spurious +iu term
  const auto t = LevyTriplet::scalar(0.0, 0.0, atoms1({{Vec(1.0), 1.0}}));
  const double u = 0.3;
  const cd expected = 1.0 - std::exp(cd(0.0, u));
  CHECK(std::abs(psi(t, u) - expected) <= 1e-15);
}

TEST_CASE("multidimensional psi uses the full quadratic form and inner products") {
  LevyTriplet t;
  t.drift = Vec{0.5, -1.0};
  t.covariance = Mat::from_rows({{2.0, 0.5}, {0.5, 1.0}});
  t.measure = LevyMeasure::atomic(2, {{Vec{1.0, 1.0}, 0.7}, {Vec{0.3, 0.0}, 2.0}});
  const Vec u{1.0, 2.0};
  // by hand: 0.5*(2 + 2*0.5*2 + 4) - i(0.5 - 2) + 0.7(1 - e^{3i}) + 2(1 - e^{0.3i} + 0.3i)
  cd expected = cd(0.5 * 8.0, 1.5);
  expected += 0.7 * (1.0 - std::exp(cd(0.0, 3.0)));
  expected += 2.0 * (1.0 - std::exp(cd(0.0, 0.3)) + cd(0.0, 0.3));
  CHECK(std::abs(psi(t, u) - expected) <= 1e-14);
}

// ------------------------------ char_fn ------------------------------------

TEST_CASE("Brownian characteristic function decays as exp(-t u^2 / 2)") {
  const auto t = LevyTriplet::scalar(0.0, 1.0, LevyMeasure::none(1));
  const cd v = char_fn(t, 1.0, 2.0);
  CHECK(v.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("time zero gives exactly one") {
  const auto t = LevyTriplet::scalar(0.9, 0.4, atoms1({{Vec(2.0), 1.0}}));
  const cd v = char_fn(t, 3.7, 0.0);
  CHECK(v.real() == 1.0);
  CHECK(v.imag() == 0.0);
}

TEST_CASE("unit-rate Poisson characteristic function") {
  const auto t = LevyTriplet::scalar(0.0, 0.0, atoms1({{Vec(1.0), 1.0}}));
  for (double u : {0.3, 1.7, -2.5}) {
    const cd expected = std::exp(-(1.0 - std::exp(cd(0.0, u))));
    CHECK(std::abs(char_fn(t, u, 1.0) - expected) <= 1e-14);
  }
}

TEST_CASE("negative or non-finite time is rejected") {
  const auto t = LevyTriplet::scalar(0.0, 1.0, LevyMeasure::none(1));
  CHECK_THROWS_AS(char_fn(t, 1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(char_fn(t, 1.0, std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

// --------------------------- CharExponent ----------------------------------

TEST_CASE("handle built from a triplet matches psi pointwise") {
  const auto t = LevyTriplet::scalar(0.2, 0.7, atoms1({{Vec(1.2), 0.9}}));
  const auto h = CharExponent::from_triplet(t);
  CHECK(h.provenance() == CharExponent::Provenance::analytic);
  for (double u : {0.0, 0.8, -1.6, 4.2}) CHECK(h(u) == psi(t, u));
}

TEST_CASE("analytic handle must vanish at the origin") {
  CHECK_THROWS_AS(
      CharExponent::analytic_fn(1, [](const Vec&) { return cd(1.0, 0.0); }),
      ValidationError);
  const auto ok = CharExponent::analytic_fn(1, [](const Vec& u) { return cd(u[0] * u[0], 0.0); });
  CHECK(ok(3.0) == cd(9.0, 0.0));
}

TEST_CASE("empirical handle: ECF of a symmetric two-point sample") {
  const double xs[] = {1.0, -1.0};
  const auto h = CharExponent::empirical_1d(xs, 1.0);
  CHECK(h.provenance() == CharExponent::Provenance::empirical);
  CHECK(h.sample_size() == 2);
  CHECK(h.zero_tolerance() == doctest::Approx(4.0 / std::sqrt(2.0)).epsilon(1e-15));
  // ECF(u) = cos(u), so psi_hat = -log cos u, real and positive below pi/2
  const cd v = h(0.5);
  CHECK(v.real() == doctest::Approx(-std::log(std::cos(0.5))).epsilon(1e-12));
  CHECK(std::abs(v.imag()) <= 1e-15);
  CHECK(std::abs(h(0.0)) == 0.0);
}

TEST_CASE("empirical handle rejects empty samples and nonpositive times") {
  const std::vector<double> none;
  CHECK_THROWS_AS(CharExponent::empirical_1d(none, 1.0), std::invalid_argument);
  const double xs[] = {1.0};
  CHECK_THROWS_AS(CharExponent::empirical_1d(xs, 0.0), std::invalid_argument);
}

// ---------------------------- serialization --------------------------------

TEST_CASE("atomic triplet round-trips bit-exactly through JSON") {
  LevyTriplet t;
  t.drift = Vec{0.1 + 0.2, -1.0 / 3.0};
  t.covariance = Mat::from_rows({{1.0, 0.25}, {0.25, 2.0}});
  t.measure = LevyMeasure::atomic(
      2, {{Vec{1.0 / 3.0, -2.0}, 1e-300}, {Vec{5.0, 0.125}, 3.7}});
  const std::string text = triplet_to_string(t);
  const LevyTriplet back = triplet_from_string(text);
  CHECK(back.drift == t.drift);
  CHECK(back.covariance(0, 1) == t.covariance(0, 1));
  REQUIRE(back.measure.atoms().size() == 2);
  CHECK(back.measure.atoms()[0].x == t.measure.atoms()[0].x);
  CHECK(back.measure.atoms()[0].mass == t.measure.atoms()[0].mass);
  // serialize -> parse -> serialize is byte-stable
  CHECK(triplet_to_string(back) == text);
}

TEST_CASE("density triplet round-trips byte-stably") {
  const auto t = LevyTriplet::scalar(0.7, 0.0,
                                     LevyMeasure::density({2.5, 1.5, 0.0, 1.0, Side::positive}));
  const std::string text = triplet_to_string(t);
  const LevyTriplet back = triplet_from_string(text);
  CHECK_FALSE(back.measure.is_atomic());
  CHECK(back.measure.power().coef == 2.5);
  CHECK(back.measure.power().beta == 1.5);
  CHECK(back.measure.power().side == Side::positive);
  CHECK(triplet_to_string(back) == text);
}

TEST_CASE("unknown fields and wrong schemas are rejected") {
  auto j = triplet_to_json(LevyTriplet::scalar(0.0, 1.0, LevyMeasure::none(1)));
  j["extra"] = 1;
  CHECK_THROWS_WITH_AS(triplet_from_json(j), "triplet: unknown field 'extra'",
                       std::invalid_argument);
  auto k = triplet_to_json(LevyTriplet::scalar(0.0, 1.0, LevyMeasure::none(1)));
  k["schema"] = "levy-triplet/2";
  CHECK_THROWS_AS(triplet_from_json(k), std::invalid_argument);
}

TEST_CASE("handwritten document parses to the expected triplet") {
  const std::string text = R"({
    "schema": "levy-triplet/1",
    "drift": [0.5],
    "covariance": [[1.0]],
    "measure": {"type": "atomic", "atoms": [{"x": [2.0], "mass": 3.0}]}
  })";
  const LevyTriplet t = triplet_from_string(text);
  CHECK(t.dim() == 1);
  CHECK(t.drift[0] == 0.5);
  CHECK(t.covariance(0, 0) == 1.0);
  REQUIRE(t.measure.atoms().size() == 1);
  CHECK(t.measure.atoms()[0].x[0] == 2.0);
  CHECK(t.measure.atoms()[0].mass == 3.0);
  // a parsed-but-invalid document is a parse success and a validation failure
  const std::string neg = R"({
    "schema": "levy-triplet/1",
    "drift": [0.0],
    "covariance": [[-1.0]],
    "measure": {"type": "atomic", "atoms": []}
  })";
  const LevyTriplet bad = triplet_from_string(neg);
  CHECK(has_violation(validate_triplet(bad), "covariance not PSD"));
}
