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

#include "neumark/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "neumark/error.hpp"

namespace neumark {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << " has dimension " << got << ", expected " << want;
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

double clamp_probability(double value, double tol) {
  if (value < -tol || value > 1.0 + tol) {
    std::ostringstream os;
    os << "probability " << value << " outside [0, 1]";
    throw Error(ErrorCode::kProbabilityOutOfRange, os.str());
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

PureState::PureState(ComplexVector amplitudes, double tol) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw Error(ErrorCode::kInvalidInput, "pure state has no amplitudes");
  if (!amplitudes_.allFinite()) throw Error(ErrorCode::kInvalidInput, "pure state has non-finite amplitudes");
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol) {
    std::ostringstream os;
    os << "pure state is not normalized (norm^2 = " << norm2 << ")";
    throw Error(ErrorCode::kInvalidInput, os.str());
  }
}

MixedState::MixedState(ComplexMatrix density, double tol) : density_(std::move(density)) {
  require_hermitian(density_, tol, "density matrix");
  const double tr = hermitian_trace(density_, tol);
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream os;
    os << "density matrix trace is " << tr << ", expected 1";
    throw Error(ErrorCode::kInvalidInput, os.str());
  }
  const EigenDecomposition eig = hermitian_eigendecompose(density_, tol);
  if (eig.eigenvalues(0) < -tol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << eig.eigenvalues(0);
    throw Error(ErrorCode::kNotPositive, os.str());
  }
}

std::size_t state_dim(const State& state) {
  return std::visit([](const auto& s) { return s.dim(); }, state);
}

ComplexMatrix state_density(const State& state) {
  return std::visit([](const auto& s) -> ComplexMatrix { return s.density(); }, state);
}

Ensemble::Ensemble(std::vector<State> states, std::vector<double> priors)
    : states_(std::move(states)), priors_(std::move(priors)) {
  if (states_.empty()) throw Error(ErrorCode::kInvalidInput, "ensemble has no states");
  if (states_.size() != priors_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "ensemble needs one prior per state");
  }
  const std::size_t n = state_dim(states_.front());
  for (const State& s : states_) require_dim(state_dim(s), n, "ensemble state");
  double total = 0.0;
  for (double p : priors_) {
    if (!(p >= 0.0)) throw Error(ErrorCode::kInvalidInput, "ensemble prior is negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "ensemble priors sum to " << total << ", expected 1";
    throw Error(ErrorCode::kInvalidInput, os.str());
  }
}

Ensemble Ensemble::uniform(std::vector<State> states) {
  const std::size_t n = states.size();
  std::vector<double> priors(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  return Ensemble(std::move(states), std::move(priors));
}

std::size_t Ensemble::dim() const { return state_dim(states_.front()); }

bool Ensemble::all_pure() const {
  return std::all_of(states_.begin(), states_.end(),
                     [](const State& s) { return std::holds_alternative<PureState>(s); });
}

std::vector<PureState> Ensemble::pure_states() const {
  std::vector<PureState> out;
  out.reserve(states_.size());
  for (const State& s : states_) {
    if (!std::holds_alternative<PureState>(s)) {
      throw Error(ErrorCode::kInvalidInput, "operation needs an ensemble of pure states");
    }
    out.push_back(std::get<PureState>(s));
  }
  return out;
}

Povm::Povm(std::size_t dim, std::vector<ComplexMatrix> elements)
    : dim_(dim), elements_(std::move(elements)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidInput, "POVM dimension must be positive");
  for (const ComplexMatrix& e : elements_) {
    require_square(e, "POVM element");
    require_dim(static_cast<std::size_t>(e.rows()), dim_, "POVM element");
    require_finite(e, "POVM element");
  }
}

ComplexMatrix Povm::conclusive_sum() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const ComplexMatrix& e : elements_) sum += e;
  return sum;
}

bool PovmValidation::valid() const { return first_failure().empty(); }

std::string PovmValidation::first_failure() const {
  for (std::size_t k = 0; k < elements.size(); ++k) {
    if (!elements[k].hermitian) return "element " + std::to_string(k + 1) + " not Hermitian";
    if (!elements[k].positive) return "element " + std::to_string(k + 1) + " not positive";
  }
  if (!inconclusive_positive) return "inconclusive element not positive";
  return {};
}

PovmValidation validate_povm(const Povm& povm, const Tolerances& tol) {
  PovmValidation report;
  bool all_hermitian = true;
  for (const ComplexMatrix& e : povm.elements()) {
    ElementCheck check;
    check.hermiticity_residual = hermiticity_residual(e);
    check.hermitian = check.hermiticity_residual <= tol.hermitian;
    if (check.hermitian) {
      check.min_eigenvalue = hermitian_eigendecompose(e, tol.hermitian, tol).eigenvalues(0);
      check.positive = check.min_eigenvalue >= -tol.probability;
    }
    all_hermitian = all_hermitian && check.hermitian;
    report.elements.push_back(check);
  }
  if (all_hermitian) {
    const auto n = static_cast<Eigen::Index>(povm.dim());
    const ComplexMatrix pi0 = ComplexMatrix::Identity(n, n) - povm.conclusive_sum();
    const EigenDecomposition eig = hermitian_eigendecompose(pi0, tol.hermitian, tol);
    report.inconclusive_min_eigenvalue = eig.eigenvalues(0);
    report.inconclusive_max_eigenvalue = eig.eigenvalues(n - 1);
    report.inconclusive_positive = report.inconclusive_min_eigenvalue >= -tol.probability;
  }
  return report;
}

ComplexMatrix inconclusive_element(const Povm& povm, const Tolerances& tol) {
  const auto n = static_cast<Eigen::Index>(povm.dim());
  ComplexMatrix pi0 = ComplexMatrix::Identity(n, n) - povm.conclusive_sum();
  require_hermitian(pi0, tol.hermitian, "inconclusive element");
  pi0 = 0.5 * (pi0 + pi0.adjoint()).eval();
  EigenDecomposition eig = hermitian_eigendecompose(pi0, tol.hermitian, tol);
  bool clamped = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    double& c = eig.eigenvalues(i);
    if (c < -tol.eigenvalue_window || c > 1.0 + tol.eigenvalue_window) {
      std::ostringstream os;
      os << "inconclusive element not positive: eigenvalue " << c << " outside [0, 1]";
      throw Error(ErrorCode::kNotPositive, os.str());
    }
    if (c < 0.0 || c > 1.0) {
      c = std::clamp(c, 0.0, 1.0);
      clamped = true;
    }
  }
  return clamped ? eig.reconstruct() : pi0;
}

double outcome_probability(const PureState& state, const ComplexMatrix& element, const Tolerances& tol) {
  require_dim(static_cast<std::size_t>(element.rows()), state.dim(), "measurement element");
  require_square(element, "measurement element");
  const ComplexVector& psi = state.amplitudes();
  const Complex value = psi.dot(element * psi);
  if (std::abs(value.imag()) > tol.imaginary) {
    std::ostringstream os;
    os << "expectation value has imaginary part " << value.imag();
    throw Error(ErrorCode::kNotHermitian, os.str());
  }
  return clamp_probability(value.real(), tol.probability);
}

double outcome_probability(const State& state, const ComplexMatrix& element, const Tolerances& tol) {
  if (const auto* pure = std::get_if<PureState>(&state)) return outcome_probability(*pure, element, tol);
  const ComplexMatrix& rho = std::get<MixedState>(state).density();
  require_dim(static_cast<std::size_t>(element.rows()), static_cast<std::size_t>(rho.rows()),
              "measurement element");
  require_square(element, "measurement element");
  // Tr(rho Pi) without forming the product.
  const Complex value = (rho.transpose().array() * element.array()).sum();
  if (std::abs(value.imag()) > tol.imaginary) {
    std::ostringstream os;
    os << "expectation value has imaginary part " << value.imag();
    throw Error(ErrorCode::kNotHermitian, os.str());
  }
  return clamp_probability(value.real(), tol.probability);
}

UsdReport verify_usd_condition(const Ensemble& ensemble, const Povm& povm, double tol,
                               const Tolerances& settings) {
  require_dim(ensemble.dim(), povm.dim(), "ensemble");
  if (ensemble.size() != povm.size()) {
    std::ostringstream os;
    os << "ensemble has " << ensemble.size() << " states but the POVM has " << povm.size()
       << " conclusive elements";
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
  const std::size_t n = ensemble.size();
  const auto ni = static_cast<Eigen::Index>(n);
  const ComplexMatrix pi0 =
      ComplexMatrix::Identity(static_cast<Eigen::Index>(povm.dim()), static_cast<Eigen::Index>(povm.dim())) -
      povm.conclusive_sum();

  UsdReport report;
  report.probabilities.resize(ni, ni);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = outcome_probability(ensemble.state(i), povm.element(j), settings);
      report.probabilities(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p;
      if (i != j && p > report.max_off_diagonal) {
        report.max_off_diagonal = p;
        report.worst_row = i;
        report.worst_col = j;
      }
    }
    const double p = report.probabilities(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    report.success.push_back(p);
    report.failure.push_back(1.0 - p);
    report.inconclusive.push_back(outcome_probability(ensemble.state(i), pi0, settings));
  }
  report.passed = report.max_off_diagonal <= tol;
  return report;
}

}  // namespace neumark
