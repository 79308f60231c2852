#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace disclose {

/// Dense row-major matrix. The conditional probability tables in this
/// project are tiny (a handful of rows/columns), so this stays a plain
/// value type with no view machinery.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix identity(std::size_t n);
    static Matrix ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 1.0); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Matrix-vector product. Throws std::invalid_argument on a size mismatch.
std::vector<double> mat_vec(const Matrix& m, std::span<const double> v);

/// Dot product; throws std::invalid_argument on a length mismatch.
double dot(std::span<const double> a, std::span<const double> b);

double column_sum(const Matrix& m, std::size_t col);

/// True iff all entries lie in [0,1] and every column sums to 1 within
/// tol. An empty matrix fails the check.
bool is_column_stochastic(const Matrix& m, double tol);

}  // namespace disclose
