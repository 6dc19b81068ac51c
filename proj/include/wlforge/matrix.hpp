#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace wlforge {

// Dense row-major matrix over an arbitrary scalar. Used with double on the
// learning path and with exact rationals on the simulation path.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative shape");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        if (rows.empty()) return Matrix(0, 0);
        Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (int r = 0; r < m.rows(); ++r) {
            if (static_cast<int>(rows[r].size()) != m.cols())
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            for (int c = 0; c < m.cols(); ++c) m.at(r, c) = rows[r][c];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const T& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<T> row(int r) { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const T> row(int r) const {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix<T> out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const T& aik = a.at(i, k);
            if (aik == T(0)) continue;
            for (int j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("Matrix: shape mismatch in sum");
    Matrix<T> out = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) += b.at(i, j);
    return out;
}

template <class T>
Matrix<T> hconcat(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("Matrix: row mismatch in hconcat");
    Matrix<T> out(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
    }
    return out;
}

template <class T>
Matrix<T> transposed(const Matrix<T>& a) {
    Matrix<T> out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
    return out;
}

}  // namespace wlforge
