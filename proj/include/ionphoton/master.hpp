#pragma once

#include <vector>

#include "ionphoton/sparse.hpp"

namespace ionphoton {

/// Lindblad generator in superoperator form over column-major vectorized
/// density matrices: d vec(rho)/dt = (A + f(t) B) vec(rho), where A carries
/// the static Hamiltonian and all dissipators and B the drive coupling.
struct Liouvillian {
    int dim = 0;  // Hilbert dimension d; the superoperator acts on d^2 vectors
    DualCsr gen;

    std::size_t vec_dim() const { return static_cast<std::size_t>(dim) * dim; }
};

/// Assembles -i[H0 + f H1, rho] + sum_c (L_c rho L_c^dag - 1/2 {L_c^dag L_c, rho}).
Liouvillian build_liouvillian(const CsrMatrix& h_static, const CsrMatrix& h_drive,
                              const std::vector<CsrMatrix>& collapse_ops);

/// Column-major vectorization helpers.
inline std::size_t vec_index(int row, int col, int dim) {
    return static_cast<std::size_t>(col) * dim + row;
}

std::vector<cplx> vectorize(const CsrMatrix& rho_like, int dim);

cplx trace_of_vec(const std::vector<cplx>& rho_vec, int dim);

/// Tr[op * rho] for vectorized rho.
cplx expectation(const CsrMatrix& op, const std::vector<cplx>& rho_vec, int dim);

/// max_ij |rho - rho^dag|.
double hermiticity_defect(const std::vector<cplx>& rho_vec, int dim);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const std::vector<cplx>& rho_vec, int dim);

/// vec(op * rho * op^dag) given vec(rho); used to seed regression evolutions.
std::vector<cplx> sandwich(const CsrMatrix& op, const std::vector<cplx>& rho_vec, int dim);

/// vec(op * rho) given vec(rho).
std::vector<cplx> left_multiply(const CsrMatrix& op, const std::vector<cplx>& rho_vec, int dim);

}  // namespace ionphoton
