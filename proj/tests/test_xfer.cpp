#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "majent/densop.hpp"
#include "majent/errors.hpp"
#include "majent/xfer.hpp"

using namespace majent;

namespace {

double max_abs_diff(const ProbVector& x, const ProbVector& y) {
  const std::size_t n = std::max(x.size(), y.size());
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < x.size() ? x[i] : 0.0;
    const double b = i < y.size() ? y[i] : 0.0;
    m = std::max(m, std::abs(a - b));
  }
  return m;
}

Eigen::VectorXd as_eigen(const ProbVector& p) {
  return Eigen::Map<const Eigen::VectorXd>(p.values().data(), static_cast<Eigen::Index>(p.size()));
}

}  // namespace

TEST_CASE("TTransform validation") {
  CHECK_NOTHROW(TTransform(0, 1, 0.5));
  CHECK_THROWS_AS(TTransform(1, 1, 0.5), InvalidArgument);
  CHECK_THROWS_AS(TTransform(0, 1, 1.5), InvalidArgument);
  CHECK_THROWS_AS(TTransform(0, 1, -0.1), InvalidArgument);
}

TEST_CASE("find_transfer_chain examples") {
  SUBCASE("single averaging step") {
    const TransferChain c = find_transfer_chain(ProbVector({0.5, 0.5}), ProbVector({1.0, 0.0}));
    REQUIRE(c.steps.size() == 1);
    CHECK(c.steps[0].i == 0);
    CHECK(c.steps[0].j == 1);
    CHECK(c.steps[0].t == doctest::Approx(0.5));
    const Eigen::MatrixXd q = chain_to_doubly_stochastic(c).matrix();
    CHECK((q - Eigen::MatrixXd::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("equal vectors need no steps") {
    const TransferChain c = find_transfer_chain(ProbVector({0.5, 0.3, 0.2}), ProbVector({0.2, 0.5, 0.3}));
    CHECK(c.steps.empty());
    CHECK(chain_to_doubly_stochastic(c).matrix().isIdentity(0.0));
  }
  SUBCASE("failure names the prefix") {
    try {
      find_transfer_chain(ProbVector({0.6, 0.4}), ProbVector({0.5, 0.5}));
      FAIL("expected MajorizationFailed");
    } catch (const MajorizationFailed& e) {
      CHECK(e.k() == 1);
      CHECK(e.lhs() == doctest::Approx(0.6));
      CHECK(e.rhs() == doctest::Approx(0.5));
    }
  }
}

TEST_CASE("transfer chain round trip and step bound") {
  Rng rng(31);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [a, b] = random_majorized_pair(dim(rng), rng);
    const TransferChain chain = find_transfer_chain(a, b);
    CHECK(chain.steps.size() + 1 <= std::max<std::size_t>(a.size(), 1));
    const ProbVector reached = apply_chain(chain, sort_desc(b));
    REQUIRE(max_abs_diff(reached, sort_desc(a)) <= 1e-9);
    const DoublyStochasticMatrix q = chain_to_doubly_stochastic(chain);
    const Eigen::VectorXd via_matrix = q * as_eigen(sort_desc(b));
    CHECK((via_matrix - as_eigen(sort_desc(a))).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("DoublyStochasticMatrix validation") {
  Eigen::MatrixXd ok(2, 2);
  ok << 0.3, 0.7, 0.7, 0.3;
  CHECK_NOTHROW(DoublyStochasticMatrix{ok});
  Eigen::MatrixXd bad = ok;
  bad(0, 0) = 0.4;
  CHECK_THROWS_AS(DoublyStochasticMatrix{bad}, NotDoublyStochastic);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.1, -0.1, -0.1, 1.1;
  CHECK_THROWS_AS(DoublyStochasticMatrix{neg}, NotDoublyStochastic);
  CHECK_THROWS_AS(DoublyStochasticMatrix(Eigen::MatrixXd::Constant(2, 3, 0.5)), NotDoublyStochastic);
}

TEST_CASE("Qv ≺ v for doubly stochastic Q") {
  Rng rng(32);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 24);
    const DoublyStochasticMatrix q = orthostochastic_of(OrthogonalMatrix(random_orthogonal(d, rng)));
    const ProbVector v = random_simplex(d, rng);
    const ProbVector qv = q * v;
    CHECK(is_majorized(qv, v, 1e-9).holds);
  }
}

TEST_CASE("birkhoff_decompose examples") {
  SUBCASE("half-half") {
    const auto dec = birkhoff_decompose(Eigen::MatrixXd::Constant(2, 2, 0.5), 1e-12);
    REQUIRE(dec.terms.size() == 2);
    CHECK(dec.terms[0].weight == doctest::Approx(0.5));
    CHECK(dec.terms[1].weight == doctest::Approx(0.5));
    CHECK(dec.terms[0].perm != dec.terms[1].perm);
  }
  SUBCASE("identity") {
    const auto dec = birkhoff_decompose(Eigen::MatrixXd::Identity(3, 3), 1e-12);
    REQUIRE(dec.terms.size() == 1);
    CHECK(dec.terms[0].weight == doctest::Approx(1.0));
    CHECK(dec.terms[0].perm == Permutation{0, 1, 2});
  }
  SUBCASE("rejects non-bistochastic input") {
    Eigen::MatrixXd m(2, 2);
    m << 0.6, 0.6, 0.4, 0.4;
    CHECK_THROWS_AS(birkhoff_decompose(m, 1e-12), NotDoublyStochastic);
  }
}

TEST_CASE("birkhoff reconstruction and term bound") {
  Rng rng(33);
  std::uniform_int_distribution<std::size_t> dim(1, 32);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = dim(rng);
    Eigen::MatrixXd q;
    if (trial % 2 == 0) {
      q = orthostochastic_of(OrthogonalMatrix(random_orthogonal(d, rng))).matrix();
    } else {
      const auto [a, b] = random_majorized_pair(d, rng);
      q = chain_to_doubly_stochastic(find_transfer_chain(a, b)).matrix();
    }
    const auto dec = birkhoff_decompose(q, 1e-12);
    CHECK(dec.terms.size() <= (d - 1) * (d - 1) + 1);
    double total = 0.0;
    for (const auto& t : dec.terms) {
      CHECK(t.weight >= 1e-12);
      Permutation sorted = t.perm;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < d; ++i) CHECK(sorted[i] == i);
      total += t.weight;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    const double err = (dec.reconstruct() - q).cwiseAbs().maxCoeff();
    CHECK(err <= birkhoff_error_bound(d, 1e-12));
    REQUIRE(err <= 1e-8);
  }
}

TEST_CASE("permutation_matrix convention") {
  const Eigen::MatrixXd p = permutation_matrix({2, 0, 1});
  CHECK(p(0, 2) == 1.0);
  CHECK(p(1, 0) == 1.0);
  CHECK(p(2, 1) == 1.0);
  CHECK(p.sum() == 3.0);
}

TEST_CASE("schur_horn_orthogonal") {
  SUBCASE("two-dimensional example") {
    const ProbVector a({0.6, 0.4}), b({0.8, 0.2});
    const Eigen::MatrixXd u = schur_horn_orthogonal(a, b).matrix();
    const Eigen::VectorXd diag = (u * Eigen::VectorXd(as_eigen(b)).asDiagonal() * u.transpose()).diagonal();
    CHECK(std::abs(diag(0) - 0.6) <= 1e-12);
    CHECK(std::abs(diag(1) - 0.4) <= 1e-12);
    const Eigen::MatrixXd q = orthostochastic_of(u).matrix();
    CHECK(std::abs(q(0, 0) - 2.0 / 3.0) <= 1e-12);
  }
  SUBCASE("random pairs") {
    Rng rng(34);
    std::uniform_int_distribution<std::size_t> dim(1, 32);
    for (int trial = 0; trial < 300; ++trial) {
      const auto [a, b] = random_majorized_pair(dim(rng), rng);
      const Eigen::MatrixXd u = schur_horn_orthogonal(a, b).matrix();
      const std::size_t d = a.size();
      CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12);
      const Eigen::VectorXd bs = as_eigen(sort_desc(b));
      const Eigen::VectorXd diag = (u * bs.asDiagonal() * u.transpose()).diagonal();
      REQUIRE((diag - as_eigen(sort_desc(a))).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("not majorized") {
    CHECK_THROWS_AS(schur_horn_orthogonal(ProbVector({0.6, 0.4}), ProbVector({0.5, 0.5})), MajorizationFailed);
  }
}

TEST_CASE("OrthogonalMatrix validation") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.1, 0.0, 1.0;
  CHECK_THROWS_AS(OrthogonalMatrix{m}, NotOrthogonal);
  CHECK_THROWS_AS(orthostochastic_of(m), NotOrthogonal);
}

TEST_CASE("apply_t_transform") {
  const ProbVector v({0.75, 0.25});
  CHECK(apply_t_transform(TTransform(0, 1, 1.0), v).values() == v.values());
  CHECK(apply_t_transform(TTransform(0, 1, 0.0), v).values() == std::vector<double>{0.25, 0.75});
  const ProbVector half = apply_t_transform(TTransform(0, 1, 0.5), v);
  CHECK(half[0] == doctest::Approx(0.5));
  CHECK(half[1] == doctest::Approx(0.5));
}

TEST_CASE("transfer chain worked examples") {
  SUBCASE("0.5 = t·0.75 + (1-t)·0.25") {
    const TransferChain c = find_transfer_chain(ProbVector({0.5, 0.5}), ProbVector({0.75, 0.25}));
    REQUIRE(c.steps.size() == 1);
    CHECK(c.steps[0].i == 0);
    CHECK(c.steps[0].j == 1);
    CHECK(std::abs(c.steps[0].t - 0.5) <= 1e-15);
  }
  SUBCASE("transfer on the tail pair") {
    const ProbVector a({0.5, 0.25, 0.25}), b({0.5, 0.5, 0.0});
    const TransferChain c = find_transfer_chain(a, b);
    REQUIRE(c.steps.size() == 1);
    CHECK(c.steps[0].i == 1);
    CHECK(c.steps[0].j == 2);
    CHECK(std::abs(c.steps[0].t - 0.5) <= 1e-15);
    const Eigen::VectorXd qb = chain_to_doubly_stochastic(c) * as_eigen(b);
    CHECK((qb - as_eigen(a)).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("birkhoff of a permutation matrix") {
  const Permutation pi{3, 1, 0, 2};
  const auto dec = birkhoff_decompose(permutation_matrix(pi), 1e-12);
  REQUIRE(dec.terms.size() == 1);
  CHECK(dec.terms[0].weight == doctest::Approx(1.0));
  CHECK(dec.terms[0].perm == pi);
}

TEST_CASE("schur_horn 45 degree rotation and trivial case") {
  const double r = std::sqrt(0.5);
  const Eigen::MatrixXd u = schur_horn_orthogonal(ProbVector({0.5, 0.5}), ProbVector({1.0, 0.0})).matrix();
  Eigen::MatrixXd expected(2, 2);
  expected << r, -r, r, r;
  CHECK((u - expected).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((orthostochastic_of(u).matrix() - Eigen::MatrixXd::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() <= 1e-15);

  const ProbVector a({0.4, 0.35, 0.25});
  CHECK(schur_horn_orthogonal(a, a).matrix().isIdentity(0.0));
  CHECK(orthostochastic_of(Eigen::MatrixXd::Identity(4, 4)).matrix().isIdentity(0.0));

  Rng rng(35);
  const auto [a6, b6] = random_majorized_pair(6, rng);
  const Eigen::MatrixXd u6 = schur_horn_orthogonal(a6, b6).matrix();
  const Eigen::VectorXd bs = as_eigen(sort_desc(b6));
  CHECK(((u6 * bs.asDiagonal() * u6.transpose()).diagonal() - as_eigen(sort_desc(a6))).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("orthostochastic of random orthogonal matrices") {
  Rng rng(36);
  for (std::size_t d = 1; d <= 20; ++d) {
    const Eigen::MatrixXd q = orthostochastic_of(random_orthogonal(d, rng)).matrix();
    CHECK((q.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-9);
    CHECK((q.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-9);
  }
}
