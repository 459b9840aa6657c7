// Copyright 2026 The Neumark Optics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "neumark/error.hpp"
#include "neumark/povm.hpp"
#include "neumark/unknown_qubits.hpp"
#include "support.hpp"

namespace neumark {
namespace {

namespace uq = unknown_qubits;

ComplexVector basis(Eigen::Index n, Eigen::Index k) {
  ComplexVector v = ComplexVector::Zero(n);
  v(k) = 1.0;
  return v;
}

TEST(States, PureNormalization) {
  EXPECT_NO_THROW(PureState(basis(2, 0)));
  EXPECT_THROW(PureState(ComplexVector::Constant(2, 1.0)), Error);
}

TEST(States, MixedChecks) {
  EXPECT_NO_THROW(MixedState(ComplexMatrix::Identity(2, 2) / 2.0));
  EXPECT_THROW(MixedState(ComplexMatrix::Identity(2, 2)), Error);  // trace 2
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(MixedState{neg}, Error);
  ComplexMatrix skew = ComplexMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = 0.1;
  EXPECT_THROW(MixedState{skew}, Error);
}

TEST(States, EnsemblePriors) {
  std::vector<State> s{PureState(basis(2, 0)), PureState(basis(2, 1))};
  EXPECT_NO_THROW(Ensemble(s, {0.25, 0.75}));
  EXPECT_THROW(Ensemble(s, {0.5, 0.6}), Error);
  EXPECT_THROW(Ensemble(s, {-0.5, 1.5}), Error);
  EXPECT_THROW(Ensemble(s, {1.0}), Error);
  std::vector<State> mixed_dims{PureState(basis(2, 0)), PureState(basis(3, 1))};
  EXPECT_THROW(Ensemble::uniform(mixed_dims), Error);
}

TEST(Validate, Projective) {
  const Povm p(2, {basis(2, 0) * basis(2, 0).adjoint(), basis(2, 1) * basis(2, 1).adjoint()});
  EXPECT_TRUE(validate_povm(p).valid());
  EXPECT_LE(max_abs(inconclusive_element(p)), 1e-15);
}

TEST(Validate, UnknownQubitOptimalAndOverweight) {
  const PovmValidation ok = validate_povm(uq::build_povm(2.0 / 3.0, 2.0 / 3.0));
  EXPECT_TRUE(ok.valid());
  EXPECT_NEAR(ok.inconclusive_min_eigenvalue, 0.0, 1e-10);
  const PovmValidation bad = validate_povm(uq::build_povm(1.0, 1.0));
  EXPECT_FALSE(bad.valid());
  EXPECT_NEAR(bad.inconclusive_min_eigenvalue, -0.5, 1e-10);
  EXPECT_EQ(bad.first_failure(), "inconclusive element not positive");
  // Oracle on the same operator.
  const ComplexMatrix pi0 = ComplexMatrix::Identity(8, 8) - uq::build_povm(1.0, 1.0).conclusive_sum();
  EXPECT_NEAR(testing::oracle_min_eigenvalue(pi0), -0.5, 1e-12);
}

TEST(Validate, NonHermitianAndNegativeElements) {
  ComplexMatrix e = ComplexMatrix::Identity(2, 2) / 2.0;
  e(0, 1) = 1e-3;
  EXPECT_FALSE(validate_povm(Povm(2, {e})).elements[0].hermitian);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = -0.1;
  const PovmValidation v = validate_povm(Povm(2, {neg}));
  EXPECT_FALSE(v.valid());
  EXPECT_FALSE(v.elements[0].positive);
}

TEST(Validate, ShapeErrors) {
  EXPECT_THROW(Povm(2, {ComplexMatrix::Identity(3, 3)}), Error);
  EXPECT_THROW(Povm(2, {ComplexMatrix::Zero(2, 3)}), Error);
  EXPECT_THROW(Povm(0, {}), Error);
}

TEST(Inconclusive, Extremes) {
  EXPECT_LE(max_abs(inconclusive_element(Povm(3, {ComplexMatrix::Identity(3, 3)}))), 1e-15);
  EXPECT_EQ(inconclusive_element(Povm(3, {})), ComplexMatrix::Identity(3, 3));
  EXPECT_THROW(inconclusive_element(uq::build_povm(1.0, 1.0)), Error);
}

TEST(Probability, Basics) {
  const ComplexMatrix p0 = basis(2, 0) * basis(2, 0).adjoint();
  EXPECT_DOUBLE_EQ(outcome_probability(PureState(basis(2, 0)), p0), 1.0);
  EXPECT_DOUBLE_EQ(outcome_probability(State(MixedState(p0)), p0), 1.0);
  EXPECT_NEAR(outcome_probability(State(MixedState(ComplexMatrix::Identity(2, 2) / 2.0)), p0), 0.5, 1e-15);
}

TEST(Probability, RegistersAgainstTraceOracle) {
  const Povm povm = uq::build_povm(2.0 / 3.0, 2.0 / 3.0);
  const uq::BlochQubit q{0.8, 2.0};
  const uq::Register same = uq::build_register(q, q, 1);
  EXPECT_NEAR(outcome_probability(same.state, povm.element(0)), 0.0, 1e-15);
  const uq::BlochQubit up{0.0, 0.0};
  const uq::BlochQubit down{std::numbers::pi, 0.0};
  const uq::Register orth = uq::build_register(up, down, 1);
  EXPECT_NEAR(outcome_probability(orth.state, povm.element(0)), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(testing::oracle_trace_product(orth.state.density(), povm.element(0)), 1.0 / 3.0, 1e-12);
}

TEST(Usd, OrthonormalProjective) {
  std::vector<State> s;
  std::vector<ComplexMatrix> e;
  for (Eigen::Index k = 0; k < 3; ++k) {
    s.emplace_back(PureState(basis(3, k)));
    e.push_back(basis(3, k) * basis(3, k).adjoint());
  }
  const UsdReport r = verify_usd_condition(Ensemble::uniform(s), Povm(3, e));
  EXPECT_TRUE(r.passed);
  for (double p : r.success) EXPECT_NEAR(p, 1.0, 1e-15);
}

TEST(Usd, RegistersAndSwappedElements) {
  std::mt19937_64 rng(21);
  const Povm povm = uq::build_povm(2.0 / 3.0, 2.0 / 3.0);
  const Povm swapped(8, {povm.element(1), povm.element(0)});
  for (int rep = 0; rep < 50; ++rep) {
    const uq::BlochQubit q1 = uq::sample_bloch(rng);
    const uq::BlochQubit q2 = uq::sample_bloch(rng);
    const Ensemble e = Ensemble::uniform(
        {uq::build_register(q1, q2, 1).state, uq::build_register(q1, q2, 2).state});
    const UsdReport r = verify_usd_condition(e, povm);
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.max_off_diagonal, 1e-10);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_NEAR(r.success[i] + r.inconclusive[i], 1.0, 1e-12);
      EXPECT_NEAR(r.success[i] + r.failure[i], 1.0, 1e-12);
    }
    EXPECT_FALSE(verify_usd_condition(e, swapped).passed);
  }
}

TEST(Usd, CountMismatch) {
  const Ensemble e = Ensemble::uniform({PureState(basis(2, 0))});
  EXPECT_THROW(verify_usd_condition(e, Povm(2, {ComplexMatrix::Identity(2, 2) / 2.0, ComplexMatrix::Zero(2, 2)})),
               Error);
}

TEST(Usd, RandomCasesSatisfyPositivityConsequence) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 40; ++rep) {
    const testing::UsdCase c = testing::random_pure_usd(rng, 2 + rep % 6, 0.9);
    const UsdReport r = verify_usd_condition(c.ensemble, c.povm);
    ASSERT_TRUE(r.passed);
    for (std::size_t i = 0; i < c.ensemble.size(); ++i) {
      EXPECT_NEAR(r.success[i] + r.inconclusive[i], 1.0, 1e-12);
      const ComplexVector& psi = std::get<PureState>(c.ensemble.state(i)).amplitudes();
      for (std::size_t k = 0; k < c.povm.size(); ++k) {
        if (k != i) EXPECT_LE((c.povm.element(k) * psi).norm(), 1e-8);
      }
    }
  }
}

TEST(Usd, MixedCases) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const testing::UsdCase c = testing::random_mixed_usd(rng, 3 + rep % 4);
    const UsdReport r = verify_usd_condition(c.ensemble, c.povm);
    EXPECT_TRUE(r.passed);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_GT(r.success[i], 1e-6);
  }
}

}  // namespace
}  // namespace neumark
