#include <doctest.h>

#include <cmath>
#include <random>

#include "eplag/error.hpp"
#include "eplag/nsp.hpp"
#include "eplag/thresholds.hpp"

using namespace eplag;
using doctest::Approx;

namespace {

const double kFirstZero = std::log((3 + std::sqrt(5.0)) / 2) / std::sqrt(0.2);  // 2.1520447048

InitialData shaped(double m0, double c, double intercept, bool cosine) {
  const Interval dom = make_interval(-0.75, 0.75);
  const DensityProfile rho = cosine ? DensityProfile(CosineDensity{}) : DensityProfile(UniformDensity{1.0});
  return build_initial_data(dom, normalize_mass(dom, rho, m0), LinearVelocity{intercept, -c}, 1024);
}

}  // namespace

TEST_SUITE("thresholds") {
  TEST_CASE("boundary point of the blow-up data") {
    const PointCondition pc = classify_point(cosine_data(0.2, 1.0), 0.75);
    CHECK(pc.case_tag == CaseTag::A);
    CHECK(pc.triggers_blowup);
    REQUIRE(pc.t_min);
    CHECK(*pc.t_min == Approx(std::log(6.854101966249685) / std::sqrt(0.2)).epsilon(1e-12));
    CHECK(pc.min_etax < 0.0);
    CHECK_FALSE(pc.c7);
  }

  TEST_CASE("boundary point of the global data") {
    const PointCondition pc = classify_point(cosine_data(0.2, 0.6), 0.75);
    CHECK_FALSE(pc.triggers_blowup);
    CHECK(pc.min_etax == Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(pc.t_min);  // the infimum is only approached as t grows
  }

  TEST_CASE("steady profile never triggers") {
    for (double m0 : {0.2, 0.25, 0.5}) {
      const InitialData d = steady_state(m0);
      for (double x : {-1.0, -0.3, 0.0, 0.9, 1.0}) {
        const PointCondition pc = classify_point(d, x);
        CHECK_FALSE(pc.triggers_blowup);
        CHECK(pc.min_etax == Approx(1.0).epsilon(1e-14));
      }
      CHECK(classify(d, 64).is_global());
    }
  }

  TEST_CASE("classifier verdicts on the cosine family") {
    const Verdict blow = classify(cosine_data(0.2, 1.0));
    REQUIRE_FALSE(blow.is_global());
    CHECK(std::abs(std::abs(blow.blowup->x_star) - 0.75) < 1e-12);
    CHECK(blow.blowup->t_first_zero == Approx(kFirstZero).epsilon(1e-10));
    CHECK(blow.blowup->t_first_zero <= blow.blowup->t_star_min);
    CHECK(std::abs(evaluate(cosine_data(0.2, 1.0), blow.blowup->x_star, blow.blowup->t_first_zero).etax) < 1e-9);
    CHECK(blow.boundary_vacuum);
    CHECK(classify(cosine_data(0.2, 0.6)).is_global());
  }

  TEST_CASE("scan size is validated") { CHECK_THROWS_AS(classify(cosine_data(0.2, 1.0), 63), Error); }

  TEST_CASE("brute force scan") {
    const BruteMin s = brute_min_etax(steady_state(0.2), 10, 64, 64);
    CHECK(s.value == Approx(1.0).epsilon(1e-14));
    CHECK(brute_min_etax(cosine_data(0.2, 1.0), 10, 256, 128).value < 0.0);
    CHECK(brute_min_etax(cosine_data(0.2, 0.6), 40, 512, 128).value > 0.0);
  }

  TEST_CASE("critical slope of the cosine family equals -lambda2") {
    const DataFamily fam = [](double c) { return cosine_data(0.2, c, 0.0, 1024); };
    const CriticalParameter cp = sweep_critical(fam, 0.6, 1.0, 1e-6, 256);
    CHECK(std::abs(cp.critical - 0.7236067977499790) < 1e-6);
    CHECK(cp.global_verdict.is_global());
    CHECK_FALSE(cp.blowup_verdict.is_global());
    // independent check one step either side
    CHECK(brute_min_etax(fam(cp.critical - 1e-3), 80, 512, 128).value > 0.0);
    CHECK(brute_min_etax(fam(cp.critical + 1e-3), 80, 512, 128).value < 0.0);
    // global side at the upper end of the bracket
    const DataFamily mirrored = [&](double p) { return fam(1.6 - p); };
    CHECK(std::abs(sweep_critical(mirrored, 0.6, 1.0, 1e-6, 256).critical - (1.6 - cp.critical)) < 2e-6);
  }

  TEST_CASE("sweep without a switch is not bracketed") {
    const DataFamily fam = [](double c) { return cosine_data(0.2, c, 0.0, 1024); };
    try {
      sweep_critical(fam, 0.1, 0.5, 1e-6, 128);
      FAIL("expected NotBracketed");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NotBracketed);
    }
  }

  TEST_CASE("mass sweep at unit slope stays on the blow-up side") {
    // at a vacuum endpoint the Riccati roots move away from -1 as M0 grows
    for (double m0 : {0.2, 0.22, 0.25, 0.27, 0.3}) {
      CHECK_FALSE(classify(cosine_data(m0, 1.0, 0.0, 1024), 256).is_global());
    }
    const DataFamily fam = [](double m0) { return cosine_data(m0, 0.6, 0.0, 1024); };
    CHECK(std::abs(sweep_critical(fam, 0.2, 0.3, 1e-7, 256).critical - 0.24) < 1e-6);
  }

  TEST_CASE("vacuum boundary trigger matches the Riccati root") {
    for (double m0 : {0.05, 0.1, 0.2, 0.24}) {
      const double d_minus = d_roots(m0).second;
      for (double c : {-d_minus - 1e-3, -d_minus + 1e-3}) {
        const PointCondition pc = classify_point(cosine_data(m0, c, 0.0, 1024), 0.75);
        CHECK(pc.triggers_blowup == (-c < d_minus));
      }
    }
  }

  TEST_CASE("Case A stationary value from the slow mode alone") {
    const InitialData d = cosine_data(0.2, 1.0);
    for (double x : {0.7, 0.72, 0.75}) {
      const PointCondition pc = classify_point(d, x);
      REQUIRE(pc.t_min);
      const Coefficients k = coefficients_at(d, x);
      const auto& a = std::get<CoefficientsA>(k.c);
      const double sq = k.regime.sqrt_abs;
      const double via = 2 * k.rho0 / 0.2 + sq / 0.2 * a.dc2 * std::exp(a.lambda2 * *pc.t_min);
      CHECK(via == Approx(evaluate(d, x, *pc.t_min).etax).epsilon(1e-10));
    }
  }

  TEST_CASE("pointwise predicate agrees with the reported infimum") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> slope(-2.0, 3.0), shift(-0.5, 0.5), pos(-0.75, 0.75);
    for (int trial = 0; trial < 60; ++trial) {
      for (double m0 : {0.1, 0.25, 0.5, 1.5}) {
        const InitialData d = shaped(m0, slope(rng), shift(rng), trial % 2 == 0);
        const double x = pos(rng);
        const PointCondition pc = classify_point(d, x);
        const bool attained = pc.min_etax <= 0.0 && pc.t_min.has_value();
        if (std::abs(pc.min_etax) > 1e-9) CHECK(pc.triggers_blowup == attained);
        if (pc.triggers_blowup) CHECK(*pc.t_min > 0.0);
        const bool tag_c = pc.case_tag != CaseTag::A && pc.case_tag != CaseTag::B;
        CHECK(tag_c == (regime(m0).variant == Regime::C));
      }
    }
  }

  TEST_CASE("oscillatory branch tags and constants") {
    const InitialData d = cosine_data(0.5, 2.0);
    const PointCondition pc = classify_point(d, 0.0);
    REQUIRE(pc.c7);
    REQUIRE(pc.c8);
    CHECK(std::abs(*pc.c8) < M_PI / 2);
    CHECK(pc.case_tag == CaseTag::C1i);
    CHECK(*pc.t_min > 0.0);
    CHECK(pc.min_etax == Approx(evaluate(d, 0.0, *pc.t_min).etax).epsilon(1e-12));
    // the stationary point is a local minimum in time
    CHECK(evaluate(d, 0.0, *pc.t_min - 1e-3).etax > pc.min_etax);
    CHECK(evaluate(d, 0.0, *pc.t_min + 1e-3).etax > pc.min_etax);
  }

  TEST_CASE("every oscillatory sign pattern locates the first minimum") {
    // dC5 = du, dC6 ~ -du/2 - M0 + 2 rho; vary du and rho through uniform data
    for (double c : {-3.0, -0.5, 0.5, 3.0}) {
      for (double m0 : {0.4, 1.0, 3.0}) {
        const Interval dom = make_interval(-0.75, 0.75);
        const InitialData d = build_initial_data(dom, normalize_mass(dom, UniformDensity{1}, m0), LinearVelocity{0, -c});
        const PointCondition pc = classify_point(d, 0.1);
        if (pc.case_tag == CaseTag::C0) continue;
        REQUIRE(pc.t_min);
        const BruteMin ref = [&] {
          double best = 1.0;
          const Coefficients k = coefficients_at(d, 0.1);
          for (int j = 0; j <= 200000; ++j) best = std::min(best, etax_at(k, 60.0 * j / 200000));
          return BruteMin{best, 0, 0.1};
        }();
        CHECK(pc.min_etax == Approx(ref.value).epsilon(1e-7));
      }
    }
  }
}
