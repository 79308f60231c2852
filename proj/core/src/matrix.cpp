#include "disclose/matrix.hpp"

#include <stdexcept>

namespace disclose {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols_)
            throw std::invalid_argument("ragged initializer rows");
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> mat_vec(const Matrix& m, std::span<const double> v) {
    if (m.cols() != v.size())
        throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot product length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double column_sum(const Matrix& m, std::size_t col) {
    double acc = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) acc += m(r, col);
    return acc;
}

bool is_column_stochastic(const Matrix& m, double tol) {
    if (m.empty()) return false;
    for (double v : m.data())
        if (!(v >= 0.0 && v <= 1.0)) return false;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const double s = column_sum(m, c);
        if (s < 1.0 - tol || s > 1.0 + tol) return false;
    }
    return true;
}

}  // namespace disclose
