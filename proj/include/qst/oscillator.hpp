#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qst/common.hpp"

namespace qst::rep {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx>;

/// Annihilation operator on the N-level number-basis truncation, a|n> = sqrt(n)|n-1>.
MatrixXcd ladder(int levels);
/// Q = (a + a^dag)/sqrt(2)
MatrixXcd position_op(int levels);
/// P = i (a^dag - a)/sqrt(2); [P,Q] = -i I exactly except the top corner.
MatrixXcd momentum_op(int levels);

SpMat to_sparse(const MatrixXcd& m, double prune = 0.0);
SpMat sparse_kron(const SpMat& a, const SpMat& b);
SpMat sparse_identity(long n);

/// Truncated tensor product of `modes` oscillators with `levels` states each.
/// Equality assertions are projected to the safe subspace (occupation <
/// n_safe in every mode); ladder truncation corrupts only the top states.
struct OscillatorSpace {
    int modes;
    int levels;
    int n_safe;

    OscillatorSpace(int modes_, int levels_, int n_safe_ = -1);

    long dim() const;
    /// Occupation numbers of a basis state (mode 0 slowest).
    std::vector<int> occupations(long index) const;

    /// op acting on one mode, identity elsewhere.
    SpMat embed(const MatrixXcd& op, int mode) const;
    SpMat mode_q(int mode) const { return embed(position_op(levels), mode); }
    SpMat mode_p(int mode) const { return embed(momentum_op(levels), mode); }

    /// 1 where every mode occupation < cutoff (cutoff < 0 means n_safe).
    Eigen::ArrayXd safe_mask(int cutoff = -1) const;
    /// max |A_ij| over rows and columns inside the safe subspace.
    double safe_block_max(const SpMat& a, int cutoff = -1) const;
    double safe_block_max(const MatrixXcd& a, int cutoff = -1) const;
};

inline SpMat commutator(const SpMat& a, const SpMat& b) {
    return SpMat((a * b - b * a).pruned(1e-300));
}

double max_abs(const SpMat& a);
double max_abs(const MatrixXcd& a);

/// V e^{i diag} V^dag for Hermitian h; unitary to machine precision.
MatrixXcd exp_i_hermitian(const MatrixXcd& h);

}  // namespace qst::rep
