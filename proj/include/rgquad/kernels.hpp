#pragma once

// Hot loops with an OpenMP implementation and a serial reference
// implementation of identical semantics. The library dispatches on
// Execution; tests and the benchmark call both sides directly.

#include <vector>

#include <Eigen/Dense>

#include "rgquad/pauli_ops.hpp"

namespace rgquad::kernels {

/// Matrix of a Pauli sum, assembled through triplets.
SpinOperator::Sparse materialize_serial(const PauliSum& sum);
/// Matrix of a Pauli sum, assembled column-parallel straight into CSC form.
SpinOperator::Sparse materialize_parallel(const PauliSum& sum);

/// Per-state expectation values and eigen-residuals of a charge family.
struct Expectations {
  Eigen::MatrixXd values;     // values(k, i) = <v_k|R_i|v_k>
  Eigen::MatrixXd residuals;  // residuals(k, i) = |R_i v_k - values(k,i) v_k|
};

Expectations expectations_serial(const std::vector<SpinOperator>& charges,
                                 const Eigen::MatrixXcd& states);
Expectations expectations_parallel(const std::vector<SpinOperator>& charges,
                                   const Eigen::MatrixXcd& states);

/// Frobenius norms of [R_i, R_j] for all i < j, in row-major pair order.
std::vector<double> commutator_norms_serial(
    const std::vector<SpinOperator>& charges);
std::vector<double> commutator_norms_parallel(
    const std::vector<SpinOperator>& charges);

}  // namespace rgquad::kernels
