#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ionphoton {

using cplx = std::complex<double>;

/// Compressed-sparse-row complex matrix. Rows/cols are ints; entries with
/// equal (row, col) are summed on construction and exact zeros dropped.
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;  // size rows+1
    std::vector<int> col;
    std::vector<cplx> val;

    static CsrMatrix zero(int rows, int cols);
    static CsrMatrix identity(int n);
    static CsrMatrix from_triplets(int rows, int cols,
                                   std::vector<std::tuple<int, int, cplx>> triplets);

    std::size_t nnz() const { return val.size(); }

    cplx coeff(int r, int c) const;

    CsrMatrix transpose() const;
    CsrMatrix conjugate() const;
    CsrMatrix adjoint() const;

    /// y = this * x (single vector).
    void multiply(const cplx* x, cplx* y) const;

    /// Block multiply: X and Y hold `width` interleaved vectors,
    /// element (state i, column b) at index i*width + b. Computes rows
    /// [row_begin, row_end) of Y = this * X.
    void multiply_block(const cplx* x, cplx* y, int width, int row_begin,
                        int row_end) const;

    friend CsrMatrix operator*(const CsrMatrix& a, const CsrMatrix& b);
    friend CsrMatrix operator+(const CsrMatrix& a, const CsrMatrix& b);
    CsrMatrix scaled(cplx factor) const;
};

/// Kronecker product a (x) b.
CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b);

/// Two matrices sharing one sparsity pattern, representing A + f(t)*B for a
/// scalar coefficient f. Built once, applied many times.
struct DualCsr {
    int dim = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<cplx> val_static;
    std::vector<cplx> val_drive;

    static DualCsr combine(const CsrMatrix& a, const CsrMatrix& b);

    std::size_t nnz() const { return col.size(); }

    /// Y[rows row_begin..row_end) = (A + f B) X for `width` interleaved
    /// vectors.
    void apply_block(double f, const cplx* x, cplx* y, int width,
                     int row_begin, int row_end) const;
};

}  // namespace ionphoton
