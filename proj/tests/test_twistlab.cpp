#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "treesmith/twistlab.hpp"

using namespace treesmith;

namespace {
LengthVector vec(const Curve& c, const std::vector<ConjClass>& g) {
  return length_vector(c, g);
}
}  // namespace

TEST_CASE("twist of the standard curve") {
  StandardPair sp = standard_pair(4);
  DehnTwist tau = twist_of(sp.t_curve);
  CHECK(format_word(sp.basis, tau.twistor) == "a");
  CHECK(format_word(sp.basis, tau.automorphism.image(2)) == "ta");
  for (int i : {0, 1, 3})
    CHECK(tau.automorphism.image(i) == Word::from_reduced({make_lit(i, false)}));
  CHECK(tau.automorphism.apply(tau.twistor) == tau.twistor);
}

TEST_CASE("acting by the identity and by the own twist fixes the vector") {
  StandardPair sp = standard_pair(4);
  auto g = default_test_classes(sp.basis, 4, 64, 0);
  LengthVector base = vec(sp.t_curve, g);
  CHECK(vec(act(sp.t_curve, Automorphism::identity(sp.basis)), g).values == base.values);
  DehnTwist tau = twist_of(sp.t_curve);
  Curve twisted = act(sp.t_curve, tau.automorphism);
  CHECK(vec(twisted, g).values == base.values);
  // and the twist of a marked curve fixes that curve as well
  Curve marked = act(sp.t_curve, Automorphism::transposition(sp.basis, 1, 3));
  DehnTwist tau_m = twist_of(marked);
  CHECK(vec(act(marked, tau_m.automorphism), g).values == vec(marked, g).values);
}

TEST_CASE("the disjoint partner is fixed by every twist power") {
  StandardPair sp = standard_pair(4);
  auto g = conjugacy_classes_up_to(sp.basis, 4);
  DehnTwist tau = twist_of(sp.t_curve);
  LengthVector base = vec(sp.t_prime, g);
  Curve cur = sp.t_prime;
  for (int k = 1; k <= 10; ++k) {
    cur = act(cur, tau.automorphism);
    CHECK(vec(cur, g).values == base.values);
  }
}

TEST_CASE("act is a right action") {
  StandardPair sp = standard_pair(4);
  auto g = default_test_classes(sp.basis, 3, 32, 1);
  Automorphism alpha = Automorphism::transposition(sp.basis, 0, 2);
  Automorphism beta = twist_of(sp.t_curve).automorphism;
  LengthVector two_steps = vec(act(act(sp.t_curve, alpha), beta), g);
  LengthVector composed = vec(act(sp.t_curve, compose(alpha, beta)), g);
  CHECK(two_steps.values == composed.values);
}

TEST_CASE("projective distance is an exact pseudometric") {
  StandardPair sp = standard_pair(4);
  auto g = default_test_classes(sp.basis, 3, 32, 5);
  LengthVector v = vec(sp.t_curve, g);
  CHECK(projective_distance(v, v) == Rational(0));
  LengthVector v3 = v;
  for (auto& x : v3.values) x *= 3;
  CHECK(projective_distance(v, v3) == Rational(0));
  LengthVector vp = vec(sp.t_prime, g);
  Rational duv = projective_distance(v, vp);
  CHECK(duv == projective_distance(vp, v));
  LengthVector w = vec(act(sp.t_curve, Automorphism::transposition(sp.basis, 0, 2)), g);
  Rational a = projective_distance(v, w), b = projective_distance(w, vp);
  CHECK(duv <= a + b);
  LengthVector zero = v;
  for (auto& x : zero.values) x = 0;
  CHECK_THROWS(projective_distance(v, zero));
}

TEST_CASE("sup distance of opposite unit vectors is 1") {
  StandardPair sp = standard_pair(4);
  std::vector<ConjClass> g = {ConjClass(parse_word(sp.basis, "t")),
                              ConjClass(parse_word(sp.basis, "v"))};
  CHECK(projective_distance(vec(sp.t_curve, g), vec(sp.t_prime, g)) == Rational(1));
}

TEST_CASE("twist convergence of the swapped curve") {
  StandardPair sp = standard_pair(4);
  Automorphism swap = Automorphism::transposition(sp.basis, 0, 2);  // a <-> t
  Curve s = act(sp.t_curve, swap);
  CHECK(translation_length(s, ConjClass(parse_word(sp.basis, "a"))) == 1);
  DehnTwist tau = twist_of(sp.t_curve);
  auto classes = convergence_test_classes(sp.basis);
  REQUIRE(classes.size() == 20);
  ConvergenceTrace trace =
      twist_converge(s, tau, sp.t_curve, classes, 200, Rational(1, 1000));
  REQUIRE(trace.k_found.has_value());
  CHECK(*trace.k_found == 42);  // measured: the trace is exactly 1/(24k)
  CHECK(trace.distances[0] == Rational(1));
  CHECK(trace.distances[100] == Rational(1, 2400));
  for (int k = *trace.k_found; k <= 200; ++k)
    CHECK(trace.distances[static_cast<std::size_t>(k)] <= Rational(1, 1000));

  // the disjoint partner does not intersect the twist's curve
  CHECK_THROWS(twist_converge(sp.t_prime, tau, sp.t_curve, classes, 10, Rational(1, 10)));
}

TEST_CASE("twist_into lands inside or reports failure") {
  StandardPair sp = standard_pair(4);
  Automorphism swap = Automorphism::transposition(sp.basis, 0, 2);
  Curve s = act(sp.t_curve, swap);
  DehnTwist tau = twist_of(sp.t_curve);
  auto classes = convergence_test_classes(sp.basis);

  NeighborhoodSpec wide = neighborhood_of(sp.t_curve, classes, Rational(1));
  TwistIntoResult r0 = twist_into(s, tau, wide, 50);
  REQUIRE(r0.power.has_value());
  CHECK(*r0.power == 0);

  NeighborhoodSpec tight = neighborhood_of(sp.t_curve, classes, Rational(1, 100));
  TwistIntoResult r1 = twist_into(s, tau, tight, 50);
  REQUIRE(r1.power.has_value());
  CHECK(*r1.power <= 50);
  CHECK(normalized_distance(tight.center, length_vector(r1.curve, classes)) <=
        tight.radius);

  // radius 0 around a non-proportional center cannot be reached
  NeighborhoodSpec zero = neighborhood_of(sp.t_prime, classes, Rational(0));
  TwistIntoResult r2 = twist_into(s, tau, zero, 20);
  CHECK(!r2.power.has_value());
}

TEST_CASE("neighborhood nesting triangle rule") {
  StandardPair sp = standard_pair(4);
  auto g = default_test_classes(sp.basis, 4, 64, 0);
  NeighborhoodSpec outer = neighborhood_of(sp.t_curve, g, Rational(1, 4));
  LengthVector inner_vec = vec(act(sp.t_curve, twist_of(sp.t_curve).automorphism), g);
  Rational d = normalized_distance(outer.center, inner_vec);
  Rational r_inner(1, 8);
  if (d + r_inner <= outer.radius) {
    // every point within r_inner of the inner center is inside the outer ball
    Rational probe = d + r_inner;
    CHECK(probe <= outer.radius);
  }
}
