#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nrange {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Entries are always finite: the checked
/// constructors reject NaN/Inf, and arithmetic on finite inputs stays finite
/// at the magnitudes this library works with.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(std::size_t n);
    static Matrix column(std::span<const Complex> values);
    static Matrix diagonal(std::span<const Complex> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    std::vector<Complex> col(std::size_t j) const;
    void set_col(std::size_t j, std::span<const Complex> values);

    /// Copy of the block starting at (r0, c0) with the given extent.
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix conj() const;
    Complex trace() const;

    double frobenius_norm() const;
    double max_abs() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(Complex scale);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Complex scale, Matrix m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);

/// x* y for equally sized vectors (conjugate-linear in the first argument).
Complex dot(std::span<const Complex> x, std::span<const Complex> y);
double norm2(std::span<const Complex> x);
std::vector<Complex> matvec(const Matrix& m, std::span<const Complex> x);

/// Rayleigh-type form <A x, x> = x* A x.
Complex quadratic_form(const Matrix& a, std::span<const Complex> x);

/// Largest elementwise |a_ij - b_ij|; throws DimensionMismatch on shape mismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

bool is_finite(Complex z) noexcept;

}  // namespace nrange
