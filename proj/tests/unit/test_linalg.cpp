// Copyright 2026 The qdyn Authors
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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qdyn/error.hpp"
#include "qdyn/haar.hpp"
#include "qdyn/linalg.hpp"

using namespace qdyn;

namespace {

ComplexMatrix random_hermitian(Index dim, CounterRng& rng) {
  ComplexMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST_CASE("herm_eig on trivial inputs") {
  const EigenDecomposition id = herm_eig(identity_operator(2));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(1) == doctest::Approx(1.0));
  const EigenDecomposition z = herm_eig(HermitianOperator(pauli_z()));
  CHECK(z.values(0) == doctest::Approx(1.0));
  CHECK(z.values(1) == doctest::Approx(-1.0));
}

TEST_CASE("herm_eig reconstructs and matches the Jacobi oracle") {
  CounterRng rng(7);
  for (Index dim : {2, 3, 8, 17, 32, 64}) {
    const ComplexMatrix h = random_hermitian(dim, rng);
    const EigenDecomposition e = herm_eig(h);
    const ComplexMatrix rebuilt =
        e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK((rebuilt - h).norm() < 1e-10);
    CHECK(is_unitary(e.vectors));
    for (Index i = 1; i < dim; ++i) CHECK(e.values(i - 1) >= e.values(i));
    if (dim <= 17) {
      const std::vector<double> ref = oracle::hermitian_eigenvalues(h);
      for (Index i = 0; i < dim; ++i) {
        CHECK(e.values(i) == doctest::Approx(ref[static_cast<std::size_t>(dim - 1 - i)]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(herm_eig(m), ValidationError);
  CHECK_THROWS_AS(HermitianOperator{m}, ValidationError);
}

TEST_CASE("trace_norm") {
  CHECK(trace_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
  CHECK(trace_norm(maximally_entangled(2).matrix()) == doctest::Approx(1.0));
  const ComplexMatrix diff = maximally_entangled(2).matrix() -
                             ComplexMatrix::Identity(4, 4) / 4.0;
  CHECK(trace_norm(diff) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(trace_norm(ComplexMatrix::Zero(2, 3)), ValidationError);

  CounterRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexMatrix m(4, 4);
    for (Index j = 0; j < 4; ++j) {
      for (Index i = 0; i < 4; ++i) m(i, j) = rng.complex_normal();
    }
    CHECK(trace_norm(m) + 1e-12 >= std::abs(m.trace()));
  }
}

TEST_CASE("fidelity and purified distance") {
  const DensityOperator zero = basis_state(2, 0);
  const DensityOperator one = basis_state(2, 1);
  const DensityOperator pi = maximally_mixed(2);
  CHECK(fidelity(zero, zero) == doctest::Approx(1.0));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(fidelity(zero, pi) == doctest::Approx(0.5));
  CHECK(fidelity(pi, zero) == doctest::Approx(0.5));
  CHECK(purified_distance(zero, zero) == doctest::Approx(0.0));
  CHECK(purified_distance(zero, one) == doctest::Approx(1.0));
  CHECK(purified_distance(zero, pi) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(fidelity(zero, maximally_mixed(3)), ValidationError);

  HaarSampler sampler(4, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho = sampler.mixed_state(4);
    const DensityOperator sigma = sampler.mixed_state(4);
    const double f = fidelity(rho, sigma);
    const double t = 0.5 * trace_norm(rho.matrix() - sigma.matrix());
    CHECK(1.0 - f <= t + 1e-10);
    CHECK(t <= std::sqrt(1.0 - f) + 1e-10);
    CHECK(f == doctest::Approx(fidelity(sigma, rho)).epsilon(1e-9));
  }
}

TEST_CASE("generalized fidelity on subnormalized operators") {
  const DensityOperator half = DensityOperator::subnormalized(
      HermitianOperator(0.5 * basis_state(2, 0).matrix()));
  const DensityOperator zero = basis_state(2, 0);
  // Unit-trace partner: the deficit term vanishes.
  CHECK(fidelity(half, zero) == doctest::Approx(0.5));
  // Two half-trace copies: (0.5 + sqrt(0.25))^2 = 1.
  CHECK(fidelity(half, half) == doctest::Approx(1.0));
}

TEST_CASE("partial trace and tensor") {
  HaarSampler sampler(2, 3);
  const DensityOperator a = sampler.mixed_state(2);
  const DensityOperator b = sampler.mixed_state(3);
  const HermitianOperator ab = tensor(a, b);
  CHECK(ab.subsystem_dims() == Dims{2, 3});
  CHECK((partial_trace(ab, {0}).matrix() - a.matrix()).norm() < 1e-14);
  CHECK((partial_trace(ab, {1}).matrix() - b.matrix()).norm() < 1e-14);
  CHECK((partial_trace(maximally_entangled(2), {0}).matrix() -
         maximally_mixed(2).matrix()).norm() < 1e-14);

  const DensityOperator rho(sampler.mixed_state(4).op().with_dims({2, 2}));
  CHECK(partial_trace(rho, {0}).trace() == doctest::Approx(1.0));
  CHECK(is_psd(partial_trace(rho, {1})));
  CHECK_THROWS_AS(partial_trace(rho, {2}), ValidationError);

  const HermitianOperator id4 = tensor(identity_operator(2), identity_operator(2));
  CHECK((id4.matrix() - ComplexMatrix::Identity(4, 4)).norm() == 0.0);
  const ComplexMatrix xz = kron(pauli_x(), pauli_z());
  CHECK(((xz * xz) - ComplexMatrix::Identity(4, 4)).norm() < 1e-15);

  // Three factors, keep the outer two.
  const DensityOperator c = sampler.mixed_state(2);
  const HermitianOperator abc = tensor(tensor(a, b), c);
  const HermitianOperator ac = partial_trace(abc, {0, 2});
  CHECK((ac.matrix() - kron(a.matrix(), c.matrix())).norm() < 1e-14);
}

TEST_CASE("partial transpose") {
  const HermitianOperator phi_t = partial_transpose(maximally_entangled(2), 1);
  CHECK(min_eigenvalue(phi_t) == doctest::Approx(-0.5));
  HaarSampler sampler(4, 9);
  const HermitianOperator rho = sampler.mixed_state(4).op().with_dims({2, 2});
  const HermitianOperator twice = partial_transpose(partial_transpose(rho, 0), 0);
  CHECK((twice.matrix() - rho.matrix()).norm() < 1e-15);
  CHECK(partial_transpose(rho, 1).trace() == doctest::Approx(1.0));
  const HermitianOperator product = tensor(sampler.mixed_state(2), sampler.mixed_state(2));
  CHECK(is_psd(partial_transpose(product, 0)));
  CHECK_THROWS_AS(partial_transpose(rho, 2), ValidationError);
}

TEST_CASE("psd_sqrt clamps tiny negative eigenvalues") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -5e-11;
  const HermitianOperator s = psd_sqrt(HermitianOperator(m));
  CHECK(s.matrix()(1, 1).real() == 0.0);
  m(1, 1) = -1e-6;
  CHECK_THROWS_AS(psd_sqrt(HermitianOperator(m)), ValidationError);
}

TEST_CASE("density operator validation") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator{HermitianOperator(m)}, ValidationError);
  m(1, 1) = -0.5;
  m(0, 0) = 1.5;
  CHECK_THROWS_AS(DensityOperator{HermitianOperator(m)}, ValidationError);
}
