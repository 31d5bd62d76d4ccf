#include "ionphoton/master.hpp"

#include <Eigen/Dense>

#include "ionphoton/errors.hpp"

namespace ionphoton {

namespace {

// Superoperator for rho -> A rho B with column-major vectorization:
// vec(A X B) = (B^T kron A) vec(X).
CsrMatrix super_lr(const CsrMatrix& a, const CsrMatrix& b) {
    return kron(b.transpose(), a);
}

}  // namespace

Liouvillian build_liouvillian(const CsrMatrix& h_static, const CsrMatrix& h_drive,
                              const std::vector<CsrMatrix>& collapse_ops) {
    const int d = h_static.rows;
    if (h_static.cols != d || h_drive.rows != d || h_drive.cols != d)
        throw NumericsError("liouvillian: Hamiltonian must be square");
    const CsrMatrix id = CsrMatrix::identity(d);
    const cplx mi(0.0, -1.0);

    CsrMatrix a_part = super_lr(h_static, id).scaled(mi) +
                       super_lr(id, h_static).scaled(-mi);
    for (const CsrMatrix& L : collapse_ops) {
        const CsrMatrix LdL = L.adjoint() * L;
        a_part = a_part + super_lr(L, L.adjoint()) +
                 super_lr(LdL, id).scaled(-0.5) + super_lr(id, LdL).scaled(-0.5);
    }
    const CsrMatrix b_part =
        super_lr(h_drive, id).scaled(mi) + super_lr(id, h_drive).scaled(-mi);

    Liouvillian liou;
    liou.dim = d;
    liou.gen = DualCsr::combine(a_part, b_part);
    return liou;
}

std::vector<cplx> vectorize(const CsrMatrix& rho_like, int dim) {
    std::vector<cplx> v(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
    for (int r = 0; r < rho_like.rows; ++r)
        for (int k = rho_like.row_ptr[static_cast<std::size_t>(r)];
             k < rho_like.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            v[vec_index(r, rho_like.col[static_cast<std::size_t>(k)], dim)] =
                rho_like.val[static_cast<std::size_t>(k)];
    return v;
}

cplx trace_of_vec(const std::vector<cplx>& rho_vec, int dim) {
    cplx tr = 0.0;
    for (int i = 0; i < dim; ++i) tr += rho_vec[vec_index(i, i, dim)];
    return tr;
}

cplx expectation(const CsrMatrix& op, const std::vector<cplx>& rho_vec, int dim) {
    // Tr[O rho] = sum_rc O(r,c) rho(c,r)
    cplx acc = 0.0;
    for (int r = 0; r < op.rows; ++r)
        for (int k = op.row_ptr[static_cast<std::size_t>(r)];
             k < op.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            acc += op.val[static_cast<std::size_t>(k)] *
                   rho_vec[vec_index(op.col[static_cast<std::size_t>(k)], r, dim)];
    return acc;
}

double hermiticity_defect(const std::vector<cplx>& rho_vec, int dim) {
    double worst = 0.0;
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r <= c; ++r) {
            const cplx d = rho_vec[vec_index(r, c, dim)] -
                           std::conj(rho_vec[vec_index(c, r, dim)]);
            worst = std::max(worst, std::abs(d));
        }
    return worst;
}

double min_eigenvalue(const std::vector<cplx>& rho_vec, int dim) {
    Eigen::MatrixXcd m(dim, dim);
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) m(r, c) = rho_vec[vec_index(r, c, dim)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

std::vector<cplx> left_multiply(const CsrMatrix& op, const std::vector<cplx>& rho_vec, int dim) {
    std::vector<cplx> out(rho_vec.size(), cplx(0.0, 0.0));
    // Column c of the result is op * column c of rho.
    for (int c = 0; c < dim; ++c)
        op.multiply(rho_vec.data() + static_cast<std::size_t>(c) * dim,
                    out.data() + static_cast<std::size_t>(c) * dim);
    return out;
}

namespace {
std::vector<cplx> vec_adjoint(const std::vector<cplx>& m, int dim) {
    std::vector<cplx> out(m.size());
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r)
            out[vec_index(r, c, dim)] = std::conj(m[vec_index(c, r, dim)]);
    return out;
}
}  // namespace

std::vector<cplx> sandwich(const CsrMatrix& op, const std::vector<cplx>& rho_vec, int dim) {
    // A rho A^dag with rho Hermitized first, so (A h)^dag = h A^dag.
    std::vector<cplx> herm(rho_vec.size());
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r)
            herm[vec_index(r, c, dim)] = 0.5 * (rho_vec[vec_index(r, c, dim)] +
                                                std::conj(rho_vec[vec_index(c, r, dim)]));
    std::vector<cplx> tmp = vec_adjoint(left_multiply(op, herm, dim), dim);
    return left_multiply(op, tmp, dim);
}

}  // namespace ionphoton
