#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nrange/error.hpp"
#include "nrange/matrix.hpp"
#include "nrange/rng.hpp"

namespace nrange {

/// n x k matrix with orthonormal columns. Every Frame in the library passes
/// through from_orthonormal, so ||V*V - I||_max <= 1e-12 holds for all of them.
class Frame {
public:
    static constexpr double kOrthonormalityTol = 1e-12;

    static Frame from_orthonormal(Matrix basis, double tol = kOrthonormalityTol);

    const Matrix& basis() const noexcept { return basis_; }
    std::size_t dim() const noexcept { return basis_.rows(); }
    std::size_t rank() const noexcept { return basis_.cols(); }

private:
    explicit Frame(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

/// max |(V*V - I)_ij|.
double orthonormality_error(const Matrix& v);

/// Modified Gram-Schmidt with one full reorthogonalization pass. R's diagonal
/// comes out real positive, so the factorization is the unique one with that
/// phase convention.
/// Throws RankDeficient when a column keeps <= tol of its original norm after
/// projecting out the previous columns.
Frame qr_orthonormalize(const Matrix& vectors, double tol = 1e-10);

struct JacobiOptions {
    double tol = 1e-13;       // off-diagonal Frobenius mass relative to ||H||_F
    int max_sweeps = 30;
    double hermitian_tol = 1e-12;  // ||H - H*||_max relative to ||H||_F
};

struct HermitianEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j pairs with values[j]
};

/// Cyclic complex Jacobi. Throws NotHermitian or NoConvergence.
HermitianEigen hermitian_eigs(const Matrix& h, const JacobiOptions& options = {});

struct QrOptions {
    double deflation = 1e-14;
    std::size_t iterations_per_eigenvalue = 40;
    bool vectors = false;
};

/// M = Z T Z*, T upper triangular, Z unitary.
struct SchurForm {
    Matrix t;
    Matrix z;
};

/// Thrown when the QR iteration cap is hit. partial() holds the current Schur
/// diagonal; only entries at indices >= converged_from() have deflated.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::vector<Complex> partial, std::size_t converged_from)
        : Error(ErrorKind::NoConvergence, what), partial_(std::move(partial)), converged_from_(converged_from) {}

    const std::vector<Complex>& partial() const noexcept { return partial_; }
    std::size_t converged_from() const noexcept { return converged_from_; }

private:
    std::vector<Complex> partial_;
    std::size_t converged_from_;
};

/// Householder reduction to Hessenberg form, then explicit single-shift complex
/// QR with Wilkinson shifts (exceptional shifts after 10 and 20 stalled steps).
/// Deflates when |h_{i,i-1}| <= deflation * (|h_ii| + |h_{i-1,i-1}|).
SchurForm schur(const Matrix& m, const QrOptions& options = {});

struct EigenDecomposition {
    std::vector<Complex> values;   // sorted by (re, im)
    std::optional<Matrix> vectors; // unit columns, same order as values
};

EigenDecomposition general_eigs(const Matrix& m, const QrOptions& options = {});

/// Eigenvectors of an upper triangular matrix by back substitution, mapped
/// through z. Columns are unit vectors in the order of t's diagonal.
Matrix schur_eigenvectors(const SchurForm& form);

/// Lexicographic (re, im) order used for every reported spectrum.
bool complex_less(Complex a, Complex b) noexcept;

/// Largest singular value, as sqrt of the top eigenvalue of A*A.
double operator_norm(const Matrix& a);

/// Smallest singular value via the Hermitian dilation [[0, M], [M*, 0]]
/// (absolute accuracy ~ eps * ||M||, unlike the squared route).
double smallest_singular_value(const Matrix& m);

/// Solves m x = b by LU with partial pivoting. Exactly singular pivots are
/// replaced by eps * ||m||_F so inverse iteration can use it near eigenvalues.
std::vector<Complex> lu_solve(Matrix m, std::vector<Complex> b);

/// Unit right eigenvector of m for an (approximate) eigenvalue, by inverse
/// iteration.
std::vector<Complex> eigenvector_for(const Matrix& m, Complex lambda, int iterations = 3);

/// Haar-distributed unit vector of C^n (normalized complex Gaussian).
std::vector<Complex> haar_unit_vector(std::size_t n, Rng& rng);

/// Haar-distributed n x k frame: Gaussian matrix, QR with positive real R
/// diagonal. Retries up to 8 times on (practically impossible) rank loss.
Frame haar_frame(std::size_t n, std::size_t k, Rng& rng);

}  // namespace nrange
