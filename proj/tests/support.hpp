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

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "neumark/numerics.hpp"
#include "neumark/povm.hpp"

namespace neumark::testing {

inline ComplexMatrix random_gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(g(rng), g(rng));
  }
  return m;
}

// Haar unitary: QR of a Gaussian matrix with the R-diagonal phases removed.
inline ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian(rng, n, n));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

inline ComplexMatrix random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  return q.cast<Complex>();
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix g = random_gaussian(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

struct UsdCase {
  Povm povm;
  Ensemble ensemble;
};

// Linearly independent pure states with dual-basis conclusive elements,
// scaled by `fraction` of the largest admissible factor; fraction = 1 makes
// Pi_0 singular.
inline UsdCase random_pure_usd(std::mt19937_64& rng, Eigen::Index n, double fraction) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const ComplexMatrix psi = random_gaussian(rng, n, n).colwise().normalized();
  const ComplexMatrix dual = psi * (psi.adjoint() * psi).inverse();
  std::vector<ComplexMatrix> proj;
  std::vector<State> states;
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    proj.push_back(u(rng) * dual.col(k) * dual.col(k).adjoint());
    sum += proj.back();
    states.emplace_back(PureState(psi.col(k)));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sum);
  const double scale = fraction / es.eigenvalues().maxCoeff();
  for (ComplexMatrix& p : proj) p *= scale;
  std::vector<double> priors(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& p : priors) total += (p = u(rng));
  for (double& p : priors) p /= total;
  priors.back() = 1.0;
  for (std::size_t k = 0; k + 1 < priors.size(); ++k) priors.back() -= priors[k];
  return {Povm(static_cast<std::size_t>(n), std::move(proj)), Ensemble(std::move(states), std::move(priors))};
}

// Two overlapping mixed states: rho_1 on span{e_0..e_{n-2}}, rho_2 of rank 2
// on a random subspace orthogonal to e_0. Pi_1 ~ projector onto supp(rho_2)^perp,
// Pi_2 ~ |e_{n-1}><e_{n-1}|.
inline UsdCase random_mixed_usd(std::mt19937_64& rng, Eigen::Index n) {
  const Eigen::Index m = n - 1;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  a.topLeftCorner(m, m) = random_gaussian(rng, m, m);
  ComplexMatrix rho1 = a * a.adjoint();
  rho1 /= rho1.trace().real();

  ComplexMatrix basis2 = random_gaussian(rng, n, 2);
  basis2.row(0).setZero();  // keeps supp(rho_2) off e_0
  const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(basis2).householderQ() *
                          ComplexMatrix::Identity(n, 2);
  const ComplexMatrix w = random_gaussian(rng, 2, 2);
  ComplexMatrix rho2 = q * (w * w.adjoint()) * q.adjoint();
  rho2 /= rho2.trace().real();

  const ComplexMatrix p2_support = q * q.adjoint();
  ComplexMatrix pi1 = ComplexMatrix::Identity(n, n) - p2_support;
  ComplexMatrix pi2 = ComplexMatrix::Zero(n, n);
  pi2(n - 1, n - 1) = 1.0;
  // Tr(rho_2 Pi_1) = 0 by construction; Tr(rho_1 Pi_2) = 0 since rho_1
  // vanishes on e_{n-1}.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pi1 + pi2);
  const double scale = 0.8 / es.eigenvalues().maxCoeff();
  std::vector<State> states{MixedState(0.5 * (rho1 + rho1.adjoint())), MixedState(0.5 * (rho2 + rho2.adjoint()))};
  return {Povm(static_cast<std::size_t>(n), {scale * pi1, scale * pi2}), Ensemble(std::move(states), {0.5, 0.5})};
}

inline double oracle_min_eigenvalue(const ComplexMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

inline double oracle_trace_product(const ComplexMatrix& rho, const ComplexMatrix& pi) {
  Complex t = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) t += rho(i, j) * pi(j, i);
  }
  return t.real();
}

// Square root through the library-independent eigensolver.
inline ComplexMatrix oracle_sqrt(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace neumark::testing
