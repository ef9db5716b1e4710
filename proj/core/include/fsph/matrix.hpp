#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

namespace fsph {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Sized for operator algebra on spaces of
// dimension O(10^3); no sparsity, no expression templates.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cplx(s); }
    friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx(s); }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        assert(a.cols_ == b.rows_);
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    cplx trace() const {
        assert(rows_ == cols_);
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    // max |A_ij - B_ij|; the workhorse metric for operator-identity checks.
    friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
        assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
        double m = 0.0;
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            m = std::max(m, std::abs(a.data_[i] - b.data_[i]));
        return m;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        assert(v.size() == cols_);
        std::vector<cplx> w(rows_, cplx(0.0));
        for (std::size_t i = 0; i < rows_; ++i) {
            cplx s = 0.0;
            const cplx* row = data_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) s += row[j] * v[j];
            w[i] = s;
        }
        return w;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b + b * a;
}

inline double hermiticity_defect(const ComplexMatrix& a) {
    return max_abs_diff(a, a.adjoint());
}

}  // namespace fsph
