#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "ergolab/verify.hpp"

using namespace ergolab;

namespace {

ExactScalar S(const char* text) { return ExactScalar::parse(text); }

std::vector<Observable> obs(std::initializer_list<const char*> specs) {
  std::vector<Observable> out;
  for (auto s : specs) out.push_back(Observable::parse(s));
  return out;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("hypothesis checks") {
  CHECK(check_hypothesis(TorusSystem::rotation({S("sqrt(2)-1")}), TheoremSpec::arithmetic(3, 1)).pass);
  auto fail = check_hypothesis(TorusSystem::rotation({S("1/2")}), TheoremSpec::arithmetic(2, 1));
  CHECK_FALSE(fail.pass);
  REQUIRE(fail.witness);
  CHECK(fail.witness->to_string() == "1/2");
  CHECK(check_hypothesis(TorusSystem::skew2(S("(sqrt(5)-1)/2")),
                         TheoremSpec::beatty(S("sqrt(2)"), S("0")))
            .pass);
  // sqrt(2) - 1 = 2/sqrt(2) - 1 lies in <1/sqrt(2)>.
  CHECK_FALSE(check_hypothesis(TorusSystem::rotation({S("sqrt(2)-1")}), TheoremSpec::beatty(S("sqrt(2)"), S("0"))).pass);
  CHECK_FALSE(check_hypothesis(TorusSystem::rotation({S("1/5")}), TheoremSpec::primes()).pass);
  CHECK(check_hypothesis(TorusSystem::rotation({S("sqrt(3)")}), TheoremSpec::squarefree()).pass);
  CHECK_FALSE(check_hypothesis(TorusSystem::rotation({S("1/3+sqrt(2)")}),
                               TheoremSpec::beatty_primes(S("sqrt(2)"), S("0")))
                  .pass);
  CHECK(check_hypothesis(TorusSystem::rotation({S("sqrt(3)")}), TheoremSpec::besicovitch({S("1/3")}, false)).pass);
}

TEST_CASE("theorem dispatch from sequences") {
  CHECK(TheoremSpec::along(IndexSequence::parse("arith:q=3,r=1")).kind == TheoremSpec::Kind::arithmetic);
  CHECK(TheoremSpec::along(IndexSequence::parse("primes")).kind == TheoremSpec::Kind::primes);
  CHECK(TheoremSpec::along(IndexSequence::parse("beatty:theta=sqrt(2),gamma=0")).uniform());
  CHECK_FALSE(TheoremSpec::along(IndexSequence::parse("squarefree")).uniform());
}

TEST_CASE("identity progression has distance zero") {
  auto sys = TorusSystem::parse("rot:alpha=sqrt(2)-1");
  auto fs = obs({"char:1", "arc:axis=0,a=0,b=1/2"});
  std::vector<std::uint64_t> sched{100, 1000};
  auto rep = run_theorem(sys, fs, TheoremSpec::arithmetic(1, 0), sched, SampleSet::grid(1, 512));
  REQUIRE(rep.rows.size() == 2);
  for (const auto& r : rep.rows) CHECK(r.distance < 1e-10);
  CHECK(rep.verdict);
}

TEST_CASE("arithmetic progression theorem") {
  auto sys = TorusSystem::parse("rot:alpha=sqrt(2)-1");
  auto fs = obs({"char:1", "char:1"});
  std::vector<std::uint64_t> sched{1000, 10000, 100000};
  auto rep = run_theorem(sys, fs, TheoremSpec::arithmetic(3, 1), sched, SampleSet::grid(1, 256));
  CHECK(rep.hypothesis.pass);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows.back().distance < 0.05);
  CHECK(rep.rows[1].distance <= rep.rows[0].distance * 1.2);
  CHECK(rep.rows[2].distance <= rep.rows[1].distance * 1.2);
  CHECK(rep.verdict);
}

TEST_CASE("negative control") {
  auto sys = TorusSystem::parse("rot:alpha=1/2");
  auto fs = obs({"char:1"});
  std::vector<std::uint64_t> sched{10000};
  auto blocked = run_theorem(sys, fs, TheoremSpec::arithmetic(2, 1), sched, SampleSet::grid(1, 256));
  CHECK_FALSE(blocked.ran);
  CHECK(blocked.rows.empty());
  RunOptions force;
  force.force = true;
  auto rep = run_theorem(sys, fs, TheoremSpec::arithmetic(2, 1), sched, SampleSet::grid(1, 256), force);
  REQUIRE(rep.rows.size() == 1);
  CHECK(std::abs(rep.rows[0].distance - 1.0) < 0.05);
  CHECK_FALSE(rep.verdict);
}

TEST_CASE("primes theorem on the skew product") {
  auto sys = TorusSystem::parse("skew:alpha=sqrt(2)-1");
  auto fs = obs({"char:0,-2", "char:0,1"});
  std::vector<std::uint64_t> sched{100000};
  auto rep = run_theorem(sys, fs, TheoremSpec::primes(), sched, SampleSet::grid(2, 64 * 64));
  CHECK(rep.hypothesis.pass);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].distance < 0.1);
}

TEST_CASE("Besicovitch weight runs") {
  auto sys = TorusSystem::parse("rot:alpha=sqrt(2)-1");
  auto fs = obs({"char:1", "char:1"});
  auto grid = SampleSet::grid(1, 256);
  std::vector<std::uint64_t> sched{1000, 10000};
  auto one = besicovitch_weight_run(sys, fs, WeightSequence::parse("const:c=1"),
                                    TheoremSpec::besicovitch({}, false), sched, grid);
  for (const auto& r : one.rows) CHECK(r.distance < 1e-12);
  std::vector<std::uint64_t> big{100000};
  auto third = besicovitch_weight_run(sys, fs, WeightSequence::parse("exp:alpha=1/3"),
                                      TheoremSpec::besicovitch({S("1/3")}, false), big, grid);
  CHECK(third.hypothesis.pass);
  CHECK(std::abs(third.extras.at("weight_mean")) < 1e-4);
  CHECK(third.extras.at("lhs_norm") < 0.02);
}

TEST_CASE("convergence verdict") {
  using R = ConvergenceRow;
  CHECK(convergence_verdict({R{1000, 0.1}, R{10000, 0.01}, R{100000, 0.001}}, 0.05));
  CHECK(convergence_verdict({R{1000, 0.01}, R{10000, 0.011}, R{100000, 0.012}}, 0.05));
  CHECK_FALSE(convergence_verdict({R{1000, 0.01}, R{10000, 0.02}, R{100000, 0.03}}, 0.05));
  CHECK_FALSE(convergence_verdict({R{100000, 0.06}}, 0.05));
  CHECK_FALSE(convergence_verdict({}, 0.05));
}

TEST_CASE("Beatty AP search") {
  std::vector<bool> full(101, true);
  full[0] = false;
  auto w = beatty_ap_search(full, S("sqrt(2)"), S("0"), 3);
  REQUIRE(w);
  CHECK(w->m == 1);
  CHECK(w->d == 1);

  std::vector<bool> mult3(10001, false);
  for (int x = 3; x <= 10000; x += 3) mult3[x] = true;
  auto w3 = beatty_ap_search(mult3, S("3"), S("0"), 3);
  REQUIRE(w3);
  CHECK(w3->d % 3 == 0);
  for (int i = 0; i <= 3; ++i) CHECK(mult3[w3->m + i * w3->d]);

  std::vector<bool> single{false, true};
  CHECK_FALSE(beatty_ap_search(single, S("sqrt(2)"), S("0"), 1));

  // Density one: the smallest Beatty term wins.
  std::vector<bool> all(501, true);
  all[0] = false;
  auto wg = beatty_ap_search(all, S("sqrt(5)"), S("7/10"), 2);
  REQUIRE(wg);
  CHECK(wg->d == beatty_term(S("sqrt(5)"), S("7/10"), 1));
}

TEST_CASE("diagonal orbit spectrum of the skew product") {
  auto sys = TorusSystem::parse("skew:alpha=sqrt(2)-1");
  const std::size_t N = 1 << 14;
  auto F = Observable::parse("char:1,4,0,-1");
  auto res = diagonal_orbit_spectrum(sys, TorusPoint::parse("1/4,0"), 2, F, N);
  REQUIRE(res.peaks.peaks.size() == 1);
  CHECK(circle_distance(res.peaks.peaks[0].theta, 0.5) < 2.0 / N);
  CHECK(res.peaks.peaks[0].magnitude >= 0.99);

  auto generic = diagonal_orbit_spectrum(sys, TorusPoint::parse("1/7,2/5"), 2, F, N);
  REQUIRE(generic.peaks.peaks.size() == 1);
  CHECK(circle_distance(generic.peaks.peaks[0].theta, 2.0 / 7.0) < 2.0 / N);

  auto base = diagonal_orbit_spectrum(sys, TorusPoint::parse("1/7,2/5"), 2, Observable::parse("char:1,0,0,0"), N);
  REQUIRE(base.peaks.peaks.size() == 1);
  CHECK(circle_distance(base.peaks.peaks[0].theta, sys.alpha()[0].to_double()) < 2.0 / N);

  // First-coordinate characters only: every peak lies in {m alpha}.
  auto spectrum = theoretical_spectrum(sys, 8);
  for (const char* spec : {"char:1,0,1,0", "char:2,0,-3,0", "char:-1,0,2,0"}) {
    auto r = diagonal_orbit_spectrum(sys, TorusPoint::parse("1/3,1/9"), 2, Observable::parse(spec), N);
    CHECK(containment_check(r.peaks, spectrum, 2.0 / N).pass);
  }
  CHECK_THROWS_AS(diagonal_orbit_spectrum(sys, TorusPoint::parse("1/4,0"), 2, Observable::parse("char:1,1"), N),
                  std::invalid_argument);
}

}
