#include <cmath>

#include <doctest.h>

#include "numsig/analysis.hpp"
#include "numsig/priors.hpp"

using namespace numsig;

namespace {

AgentNet identity_sender(int n) {
  AgentNet net(n, n, n, 1.0);
  for (int j = 0; j < n; ++j) net.w1()[j * n + j] = 10.0;
  for (int o = 0; o < n; ++o) net.w2()[o * n + o] = 10.0;
  return net;
}

NeedPrior random_prior(int n, Rng& rng) {
  std::vector<double> w(static_cast<size_t>(n));
  for (double& v : w) v = uniform01(rng) + 1e-3;
  return NeedPrior::normalized(std::move(w));
}

NumeralSystem random_surjective(int n, int k, Rng& rng) {
  NumeralSystem s;
  for (int i = 0; i < n; ++i) s.assignment.push_back(i < k ? i : uniform_int(rng, k));
  for (int i = n - 1; i > 0; --i) {
    std::swap(s.assignment[i], s.assignment[uniform_int(rng, i + 1)]);
  }
  return s;
}

// Direct evaluation of sum_cells mass(cell) * H(prior | cell).
double cell_decomposition_bits(const NumeralSystem& system, const NeedPrior& prior, int k) {
  double total = 0.0;
  for (int w = 0; w < k; ++w) {
    double mass = 0.0;
    for (int i = 0; i < system.size(); ++i) {
      if (system.assignment[i] == w) mass += prior[i];
    }
    if (mass <= 0.0) continue;
    double h = 0.0;
    for (int i = 0; i < system.size(); ++i) {
      if (system.assignment[i] != w || prior[i] <= 0.0) continue;
      const double q = prior[i] / mass;
      h -= q * std::log2(q);
    }
    total += mass * h;
  }
  return total;
}

}  // namespace

TEST_CASE("estimate_naming of a deterministic sender is one hot") {
  const AgentNet sender = identity_sender(6);
  Rng rng(17);
  const NamingDistribution naming = estimate_naming(sender, 200, rng);
  for (int i = 0; i < 6; ++i) {
    for (int w = 0; w < 6; ++w) CHECK(naming.at(i, w) == (i == w ? 1.0 : 0.0));
  }
}

TEST_CASE("estimate_naming resolves exact ties to the lowest word") {
  // Words 0 and 1 share the value b2 under every mask (no hidden wiring),
  // so the tie-break makes the estimate one-hot on word 0.
  AgentNet sender(4, 5, 3, 0.7);
  sender.b2()[0] = 5.0;
  sender.b2()[1] = 5.0;
  Rng rng(23);
  const NamingDistribution naming = estimate_naming(sender, 500, rng);
  for (int i = 0; i < 4; ++i) {
    CHECK(naming.at(i, 0) == 1.0);
    CHECK(naming.at(i, 1) == 0.0);
  }
}

TEST_CASE("estimate_naming replays identically under the same seed") {
  Rng init(31);
  const AgentNet sender = AgentNet::glorot(8, 16, 5, 0.7, init);
  Rng a(7), b(7);
  const NamingDistribution na = estimate_naming(sender, 300, a);
  const NamingDistribution nb = estimate_naming(sender, 300, b);
  for (int i = 0; i < 8; ++i) {
    for (int w = 0; w < 5; ++w) CHECK(na.at(i, w) == nb.at(i, w));
  }
}

TEST_CASE("classify uses a strict 0.90 threshold") {
  NumeralSystem identity;
  for (int i = 0; i < 5; ++i) identity.assignment.push_back(i);
  CHECK(classify(one_hot_naming(identity, 5)) == SystemKind::kExact);

  const NamingDistribution soft = NamingDistribution::from_rows({{0.5, 0.5}, {1.0, 0.0}});
  CHECK(classify(soft) == SystemKind::kApproximate);

  const NamingDistribution boundary = NamingDistribution::from_rows({{0.90, 0.10}});
  CHECK(classify(boundary) == SystemKind::kApproximate);  // strictly more than 0.90

  const NamingDistribution above = NamingDistribution::from_rows({{0.91, 0.09}});
  CHECK(classify(above) == SystemKind::kExact);
}

TEST_CASE("mode_system") {
  NumeralSystem identity;
  for (int i = 0; i < 4; ++i) identity.assignment.push_back(i);
  CHECK(mode_system(one_hot_naming(identity, 4)).assignment == identity.assignment);

  std::vector<std::vector<double>> rows;
  for (int n = 1; n <= 20; ++n) {
    rows.push_back(n <= 3 ? std::vector<double>{0.8, 0.2} : std::vector<double>{0.3, 0.7});
  }
  const NumeralSystem two = mode_system(NamingDistribution::from_rows(rows));
  for (int i = 0; i < 20; ++i) CHECK(two.assignment[i] == (i < 3 ? 0 : 1));
  CHECK(two.term_count() == 2);

  const NamingDistribution tied = NamingDistribution::from_rows({{0.5, 0.5}});
  CHECK(mode_system(tied).assignment[0] == 0);
}

TEST_CASE("listener posterior examples") {
  const NumberLine line;
  Rng rng(3);
  const NeedPrior prior = random_prior(20, rng);

  NumeralSystem identity;
  for (int i = 0; i < 20; ++i) identity.assignment.push_back(i);
  const ListenerPosterior point = listener_posterior(one_hot_naming(identity, 20), prior);
  for (int w = 0; w < 20; ++w) {
    CHECK(point.reachable[w]);
    for (int i = 0; i < 20; ++i) CHECK(point.rows[w][i] == (i == w ? 1.0 : 0.0));
  }

  const NamingDistribution single(std::vector<double>(20, 1.0), 20, 1);
  const ListenerPosterior bayes = listener_posterior(single, prior);
  for (int i = 0; i < 20; ++i) {
    CHECK(bayes.rows[0][i] == doctest::Approx(prior[i]).epsilon(1e-12));
  }

  NumeralSystem halves;
  for (int i = 0; i < 20; ++i) halves.assignment.push_back(i < 10 ? 0 : 1);
  const ListenerPosterior cells =
      listener_posterior(one_hot_naming(halves, 2), uniform_prior(line));
  for (int i = 0; i < 20; ++i) {
    CHECK(cells.rows[i < 10 ? 0 : 1][i] == doctest::Approx(0.1).epsilon(1e-12));
  }

  // unreachable word: all-zero row, flagged
  NumeralSystem ones;
  for (int i = 0; i < 20; ++i) ones.assignment.push_back(0);
  const ListenerPosterior unreachable =
      listener_posterior(one_hot_naming(ones, 2), uniform_prior(line));
  CHECK(unreachable.reachable[0]);
  CHECK_FALSE(unreachable.reachable[1]);
  for (int i = 0; i < 20; ++i) CHECK(unreachable.rows[1][i] == 0.0);
}

TEST_CASE("communication cost examples") {
  const NumberLine line;
  const NeedPrior uniform = uniform_prior(line);

  NumeralSystem identity;
  for (int i = 0; i < 20; ++i) identity.assignment.push_back(i);
  const CostReport zero = comm_cost(one_hot_naming(identity, 20), uniform);
  CHECK(zero.cost_bits == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(zero.term_count == 20);
  CHECK(zero.kind == SystemKind::kExact);

  const NamingDistribution single(std::vector<double>(20, 1.0), 20, 1);
  const CostReport one_word = comm_cost(single, uniform);
  CHECK(one_word.cost_bits == doctest::Approx(std::log2(20.0)).epsilon(1e-12));
  CHECK(one_word.term_count == 1);

  NumeralSystem halves;
  for (int i = 0; i < 20; ++i) halves.assignment.push_back(i < 10 ? 0 : 1);
  const CostReport two = comm_cost(one_hot_naming(halves, 2), uniform);
  CHECK(two.cost_bits == doctest::Approx(std::log2(10.0)).epsilon(1e-12));
}

TEST_CASE("cost equals the cell decomposition on random partitions") {
  Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 20;
    const int k = 1 + uniform_int(rng, 10);
    const NumeralSystem system = random_surjective(n, k, rng);
    const NeedPrior prior = random_prior(n, rng);
    const CostReport report = comm_cost(one_hot_naming(system, k), prior);
    const double oracle = cell_decomposition_bits(system, prior, k);
    CHECK(report.cost_bits == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(report.cost_bits <= prior.entropy_bits() + 1e-9);
    CHECK(report.term_count == k);
    CHECK(report.kind == SystemKind::kExact);
  }
}

TEST_CASE("merging two words never lowers the cost") {
  Rng rng(808);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 20;
    const int k = 2 + uniform_int(rng, 9);
    const NumeralSystem system = random_surjective(n, k, rng);
    const NeedPrior prior = random_prior(n, rng);

    NumeralSystem merged = system;
    const int a = uniform_int(rng, k);
    int b = uniform_int(rng, k);
    if (b == a) b = (a + 1) % k;
    for (int& w : merged.assignment) {
      if (w == b) w = a;
    }
    const double before = comm_cost(one_hot_naming(system, k), prior).cost_bits;
    const double after = comm_cost(one_hot_naming(merged, k), prior).cost_bits;
    CHECK(after >= before - 1e-9);
  }
}

TEST_CASE("posterior mixture reconstructs the prior") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 12, k = 5;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(k);
      double sum = 0.0;
      for (double& v : row) {
        v = uniform01(rng) + 1e-6;
        sum += v;
      }
      for (double& v : row) v /= sum;
      rows.push_back(row);
    }
    const NamingDistribution naming = NamingDistribution::from_rows(rows);
    const NeedPrior prior = random_prior(n, rng);
    const ListenerPosterior post = listener_posterior(naming, prior);
    for (int i = 0; i < n; ++i) {
      double recovered = 0.0;
      for (int w = 0; w < k; ++w) recovered += post.rows[w][i] * post.marginals[w];
      CHECK(recovered == doctest::Approx(prior[i]).epsilon(1e-9));
    }
  }
}
