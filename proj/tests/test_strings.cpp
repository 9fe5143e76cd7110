#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "betheforge/strings.hpp"

using namespace betheforge;

namespace {

ChainSpec heis(int L) { return make_chain_spec(std::vector<Spin>(1, Spin(1)), L); }

}  // namespace

TEST_CASE("phi kernel structure") {
  // Phi_2^(1/2,1/2) = phi_2 with the phi_0 convention
  for (double l : {-1.3, 0.4, 2.2}) {
    CHECK(Phi_pair(1, 1, l) == doctest::Approx(2.0 * std::atan(l)).epsilon(1e-14));
    CHECK(Phi_driving(1, 1, l) == doctest::Approx(2.0 * std::atan(2.0 * l)).epsilon(1e-14));
  }
  // spin-1 chain kernels: Phi_2^(1) = phi_1 + phi_3, Phi_2^(1,1) = phi_4 + 2 phi_2
  for (double l : {0.7}) {
    CHECK(Phi_driving(2, 2, l) ==
          doctest::Approx(phi_fn(1, l) + phi_fn(3, l)).epsilon(1e-14));
    CHECK(Phi_pair(2, 2, l) ==
          doctest::Approx(phi_fn(4, l) + 2.0 * phi_fn(2, l)).epsilon(1e-14));
  }
  // odd functions vanish at the origin
  for (int p : {1, 2, 3})
    for (int m2 : {1, 2, 3}) {
      CHECK(Phi_driving(p, m2, 0.0) == 0.0);
      CHECK(Phi_pair(p, m2, 0.0) == 0.0);
    }
  // Psi is the lambda-derivative of Phi
  double h = 1e-6;
  for (double l : {-1.0, 0.3, 2.0})
    for (int p : {1, 2, 3})
      for (int m2 : {1, 2}) {
        double fd = (Phi_driving(p, m2, l + h) - Phi_driving(p, m2, l - h)) / (2 * h);
        CHECK(fd == doctest::Approx(Psi_driving(p, m2, l)).epsilon(1e-8));
        double fd2 = (Phi_pair(p, m2, l + h) - Phi_pair(p, m2, l - h)) / (2 * h);
        CHECK(fd2 == doctest::Approx(Psi_pair(p, m2, l)).epsilon(1e-8));
      }
  CHECK_THROWS_AS(phi_kernels(0, 1, 0.0), domain_error);
}

TEST_CASE("valence values") {
  auto spec2 = heis(2);
  StringConfig one;
  one.nu[1] = 1;
  auto v = valence(spec2, one, 1);
  CHECK(v.P_m == 1);
  CHECK(v.Q_max_doubled == 0);

  // vacuum: P_s - nu_s = 0 for every sea
  for (auto spec : {heis(4), heis(6), make_chain_spec({Spin(1), Spin(2)}, 2)}) {
    auto vac = vacuum_config(spec);
    for (int j = 1; j <= spec.num_seas(); ++j) {
      int s2 = spec.sea_doubled(j);
      CHECK(valence(spec, vac, s2).P_m == vac.nu.at(s2));
    }
    // no negative valences off the seas either
    for (int m2 = 1; m2 <= 6; ++m2) CHECK(valence(spec, vac, m2).P_m >= 0);
  }

  // empty configuration: P_m = 2 sum_i min(m, s_i)
  StringConfig empty;
  auto alt = make_chain_spec({Spin(1), Spin(2)}, 2);
  CHECK(valence(alt, empty, 2).P_m == 2 * (1 + 2));  // doubled min(1,s_i) terms, L = 4
  CHECK(valence(alt, empty, 1).P_m == 4);

  // Q lattice is symmetric by construction: Q_min = -Q_max
  CHECK(valence(spec2, one, 1).Q_max_doubled == -(-v.Q_max_doubled));
}

TEST_CASE("count_states frozen values") {
  auto spec2 = heis(2);
  CHECK(count_states(spec2, 0) == 3);
  CHECK(count_states(spec2, 1) == 1);
  CHECK(count_states(spec2, 2) == 0);  // M > S_0

  // single spin-1 site: Hilbert dimension 3 in total
  auto one_site = make_chain_spec({Spin(2)}, 1);
  BigInt total = 0;
  for (int M = 0; M <= 1; ++M) total += count_states(one_site, M);
  CHECK(total == 3);

  // parallel and serial enumerations agree
  auto spec6 = heis(6);
  for (int M = 0; M <= 3; ++M) CHECK(count_states(spec6, M) == count_states_serial(spec6, M));
}

TEST_CASE("completeness for the six listed motifs") {
  std::vector<std::pair<std::vector<Spin>, int>> motifs = {
      {{Spin(1)}, 8},
      {{Spin(2)}, 6},
      {{Spin(3)}, 4},
      {{Spin(1), Spin(2)}, 3},
      {{Spin(1), Spin(3)}, 3},
      {{Spin(1), Spin(2), Spin(2)}, 2},
  };
  for (auto& [motif, repeats] : motifs) {
    auto spec = make_chain_spec(motif, repeats, BigInt(1) << 40);
    auto result = completeness_check(spec);
    CHECK(result.equal);
    CHECK(result.sum == result.hilbert_dim);
  }
  // frozen small cases
  CHECK(completeness_check(heis(2)).hilbert_dim == 4);
  CHECK(completeness_check(heis(8)).sum == 256);
  auto alt2 = make_chain_spec({Spin(1), Spin(2)}, 2);
  CHECK(completeness_check(alt2).sum == 36);
}

TEST_CASE("series identity") {
  // (1/2) x 2: b_1 = -2, b_2 = 2
  CHECK(series_identity_check({{1, -2}, {2, 2}}, 2));
  // (1) x 2: b_1 = -2, b_3 = 2
  CHECK(series_identity_check({{1, -2}, {3, 2}}, 4));
  // deeper order on an alternating set
  CHECK(series_identity_check({{1, -4}, {2, 2}, {3, 2}}, 6));
  // inadmissible sets are rejected
  CHECK_THROWS_AS(series_identity_check({}, 2), domain_error);
  CHECK_THROWS_AS(series_identity_check({{1, 0}}, 2), domain_error);
  CHECK_THROWS_AS(series_identity_check({{1, -2}}, 30), domain_error);
}

TEST_CASE("generalized binomials") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(-1, 1) == 0);
  CHECK(binomial_general(-1, 1) == -1);
  CHECK(binomial_general(-2, 3) == -4);
  CHECK(binomial_general(4, 2) == 6);
}

TEST_CASE("logarithmic Bethe equations and string centers") {
  // vacuum of (1/2) x 4: two half-strings with Q = -1/2, +1/2
  auto spec4 = heis(4);
  auto vac = vacuum_config(spec4);
  QuantumNumbers Q;
  Q.Q2[{1, 1}] = -1;
  Q.Q2[{1, 2}] = 1;
  auto centers = solve_string_centers(spec4, vac, Q);
  REQUIRE(centers.size() == 2);
  CHECK(centers[0] == doctest::Approx(-centers[1]).epsilon(1e-10));
  auto res = log_bethe_residual(spec4, vac, centers, Q);
  for (double r : res) CHECK(std::abs(r) < 1e-10);

  // a single string at Q = 0 on a parity-symmetric chain sits at the origin
  auto spec2 = heis(2);
  StringConfig single;
  single.nu[1] = 1;
  QuantumNumbers Q0;
  Q0.Q2[{1, 1}] = 0;
  auto c0 = solve_string_centers(spec2, single, Q0);
  CHECK(std::abs(c0[0]) < 1e-12);
  CHECK(std::abs(log_bethe_residual(spec2, single, {0.0}, Q0)[0]) < 1e-14);

  // wrong-parity quantum number: no real-center solution
  QuantumNumbers Qbad;
  Qbad.Q2[{1, 1}] = 7;  // far outside the valence window
  CHECK_THROWS_AS(solve_string_centers(spec2, single, Qbad), numeric_error);
}

TEST_CASE("string seeds") {
  StringConfig config;
  config.nu[3] = 1;  // one 3-string
  auto seeds = expand_string_seeds(config, {0.4}, 0.9);
  REQUIRE(seeds.size() == 3);
  CHECK(seeds[0] == cplx(0.4, -0.9));
  CHECK(seeds[1] == cplx(0.4, 0.0));
  CHECK(seeds[2] == cplx(0.4, 0.9));
}

TEST_CASE("state enumeration counts follow the valences") {
  auto spec4 = heis(4);
  // M = 2: the real pair (C(2,2) = 1) and one 2-string (C(1,1) = 1)
  auto labels = enumerate_states(spec4, 2);
  CHECK(labels.size() == 2);
  // M = 1: three single-root states
  CHECK(enumerate_states(spec4, 1).size() == 3);
  // the enumeration matches the counting formula per M (without degeneracy)
  for (int M = 1; M <= 2; ++M) {
    Rational s0 = spec4.highest_spin();
    long long pref = (Rational(2) * s0).numerator() - 2 * M + 1;
    CHECK(BigInt(static_cast<long long>(enumerate_states(spec4, M).size())) * pref ==
          count_states(spec4, M));
  }
}
