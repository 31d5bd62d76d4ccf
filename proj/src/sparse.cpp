#include "ionphoton/sparse.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace ionphoton {

CsrMatrix CsrMatrix::zero(int rows, int cols) {
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    return m;
}

CsrMatrix CsrMatrix::identity(int n) {
    std::vector<std::tuple<int, int, cplx>> t;
    t.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, cplx(1.0, 0.0));
    return from_triplets(n, n, std::move(t));
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols,
                                   std::vector<std::tuple<int, int, cplx>> triplets) {
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) <
                         std::tie(std::get<0>(b), std::get<1>(b));
              });
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    std::size_t i = 0;
    for (int r = 0; r < rows; ++r) {
        m.row_ptr[static_cast<std::size_t>(r)] = static_cast<int>(m.col.size());
        while (i < triplets.size() && std::get<0>(triplets[i]) == r) {
            const int c = std::get<1>(triplets[i]);
            cplx v = 0.0;
            while (i < triplets.size() && std::get<0>(triplets[i]) == r &&
                   std::get<1>(triplets[i]) == c) {
                v += std::get<2>(triplets[i]);
                ++i;
            }
            if (v != cplx(0.0, 0.0)) {
                m.col.push_back(c);
                m.val.push_back(v);
            }
        }
    }
    m.row_ptr[static_cast<std::size_t>(rows)] = static_cast<int>(m.col.size());
    if (i != triplets.size()) throw std::out_of_range("triplet row out of range");
    return m;
}

cplx CsrMatrix::coeff(int r, int c) const {
    for (int k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
        if (col[static_cast<std::size_t>(k)] == c) return val[static_cast<std::size_t>(k)];
    return 0.0;
}

CsrMatrix CsrMatrix::transpose() const {
    std::vector<std::tuple<int, int, cplx>> t;
    t.reserve(nnz());
    for (int r = 0; r < rows; ++r)
        for (int k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            t.emplace_back(col[static_cast<std::size_t>(k)], r, val[static_cast<std::size_t>(k)]);
    return from_triplets(cols, rows, std::move(t));
}

CsrMatrix CsrMatrix::conjugate() const {
    CsrMatrix m = *this;
    for (auto& v : m.val) v = std::conj(v);
    return m;
}

CsrMatrix CsrMatrix::adjoint() const { return transpose().conjugate(); }

void CsrMatrix::multiply(const cplx* x, cplx* y) const {
    for (int r = 0; r < rows; ++r) {
        cplx acc = 0.0;
        for (int k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            acc += val[static_cast<std::size_t>(k)] * x[col[static_cast<std::size_t>(k)]];
        y[r] = acc;
    }
}

void CsrMatrix::multiply_block(const cplx* x, cplx* y, int width, int row_begin,
                               int row_end) const {
    for (int r = row_begin; r < row_end; ++r) {
        cplx* out = y + static_cast<std::size_t>(r) * width;
        for (int b = 0; b < width; ++b) out[b] = 0.0;
        for (int k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const cplx a = val[static_cast<std::size_t>(k)];
            const cplx* in = x + static_cast<std::size_t>(col[static_cast<std::size_t>(k)]) * width;
            for (int b = 0; b < width; ++b) out[b] += a * in[b];
        }
    }
}

CsrMatrix operator*(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matrix product shape mismatch");
    std::vector<std::tuple<int, int, cplx>> t;
    for (int r = 0; r < a.rows; ++r) {
        std::map<int, cplx> row;
        for (int k = a.row_ptr[static_cast<std::size_t>(r)]; k < a.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const int m = a.col[static_cast<std::size_t>(k)];
            const cplx av = a.val[static_cast<std::size_t>(k)];
            for (int l = b.row_ptr[static_cast<std::size_t>(m)]; l < b.row_ptr[static_cast<std::size_t>(m) + 1]; ++l)
                row[b.col[static_cast<std::size_t>(l)]] += av * b.val[static_cast<std::size_t>(l)];
        }
        for (const auto& [c, v] : row) t.emplace_back(r, c, v);
    }
    return CsrMatrix::from_triplets(a.rows, b.cols, std::move(t));
}

CsrMatrix operator+(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("matrix sum shape mismatch");
    std::vector<std::tuple<int, int, cplx>> t;
    t.reserve(a.nnz() + b.nnz());
    for (int r = 0; r < a.rows; ++r)
        for (int k = a.row_ptr[static_cast<std::size_t>(r)]; k < a.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            t.emplace_back(r, a.col[static_cast<std::size_t>(k)], a.val[static_cast<std::size_t>(k)]);
    for (int r = 0; r < b.rows; ++r)
        for (int k = b.row_ptr[static_cast<std::size_t>(r)]; k < b.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            t.emplace_back(r, b.col[static_cast<std::size_t>(k)], b.val[static_cast<std::size_t>(k)]);
    return CsrMatrix::from_triplets(a.rows, a.cols, std::move(t));
}

CsrMatrix CsrMatrix::scaled(cplx factor) const {
    CsrMatrix m = *this;
    for (auto& v : m.val) v *= factor;
    return m;
}

CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b) {
    std::vector<std::tuple<int, int, cplx>> t;
    t.reserve(a.nnz() * b.nnz());
    for (int ra = 0; ra < a.rows; ++ra)
        for (int ka = a.row_ptr[static_cast<std::size_t>(ra)]; ka < a.row_ptr[static_cast<std::size_t>(ra) + 1]; ++ka)
            for (int rb = 0; rb < b.rows; ++rb)
                for (int kb = b.row_ptr[static_cast<std::size_t>(rb)]; kb < b.row_ptr[static_cast<std::size_t>(rb) + 1]; ++kb)
                    t.emplace_back(ra * b.rows + rb,
                                   a.col[static_cast<std::size_t>(ka)] * b.cols + b.col[static_cast<std::size_t>(kb)],
                                   a.val[static_cast<std::size_t>(ka)] * b.val[static_cast<std::size_t>(kb)]);
    return CsrMatrix::from_triplets(a.rows * b.rows, a.cols * b.cols, std::move(t));
}

DualCsr DualCsr::combine(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols || a.rows != a.cols)
        throw std::invalid_argument("DualCsr requires equal square matrices");
    DualCsr d;
    d.dim = a.rows;
    d.row_ptr.assign(static_cast<std::size_t>(a.rows) + 1, 0);
    for (int r = 0; r < a.rows; ++r) {
        d.row_ptr[static_cast<std::size_t>(r)] = static_cast<int>(d.col.size());
        int ka = a.row_ptr[static_cast<std::size_t>(r)];
        int kb = b.row_ptr[static_cast<std::size_t>(r)];
        const int ea = a.row_ptr[static_cast<std::size_t>(r) + 1];
        const int eb = b.row_ptr[static_cast<std::size_t>(r) + 1];
        while (ka < ea || kb < eb) {
            const int ca = ka < ea ? a.col[static_cast<std::size_t>(ka)] : a.cols;
            const int cb = kb < eb ? b.col[static_cast<std::size_t>(kb)] : b.cols;
            if (ca < cb) {
                d.col.push_back(ca);
                d.val_static.push_back(a.val[static_cast<std::size_t>(ka++)]);
                d.val_drive.push_back(0.0);
            } else if (cb < ca) {
                d.col.push_back(cb);
                d.val_static.push_back(0.0);
                d.val_drive.push_back(b.val[static_cast<std::size_t>(kb++)]);
            } else {
                d.col.push_back(ca);
                d.val_static.push_back(a.val[static_cast<std::size_t>(ka++)]);
                d.val_drive.push_back(b.val[static_cast<std::size_t>(kb++)]);
            }
        }
    }
    d.row_ptr[static_cast<std::size_t>(a.rows)] = static_cast<int>(d.col.size());
    return d;
}

void DualCsr::apply_block(double f, const cplx* x, cplx* y, int width,
                          int row_begin, int row_end) const {
    for (int r = row_begin; r < row_end; ++r) {
        cplx* out = y + static_cast<std::size_t>(r) * width;
        for (int b = 0; b < width; ++b) out[b] = 0.0;
        for (int k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const cplx a = val_static[static_cast<std::size_t>(k)] + f * val_drive[static_cast<std::size_t>(k)];
            const cplx* in = x + static_cast<std::size_t>(col[static_cast<std::size_t>(k)]) * width;
            for (int b = 0; b < width; ++b) out[b] += a * in[b];
        }
    }
}

}  // namespace ionphoton
