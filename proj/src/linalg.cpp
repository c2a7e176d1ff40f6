#include "nrange/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace nrange {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const Matrix& m, const char* op) {
    if (!m.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, std::string(op) + " needs a square matrix, got " +
                                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

// Complex Givens rotation G = [c s; -conj(s) c] with G [a; b] = [r; 0].
struct Givens {
    double c;
    Complex s;
};

Givens make_givens(Complex a, Complex b) {
    const double abs_a = std::abs(a);
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) return {1.0, 0.0};
    if (abs_a == 0.0) return {0.0, std::conj(b) / abs_b};
    const double norm = std::hypot(abs_a, abs_b);
    const Complex alpha = a / abs_a;
    return {abs_a / norm, alpha * std::conj(b) / norm};
}

void reduce_to_hessenberg(Matrix& h, Matrix* z) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    std::vector<Complex> v;
    for (std::size_t j = 0; j + 2 < n; ++j) {
        const std::size_t len = n - j - 1;
        v.assign(len, 0.0);
        for (std::size_t i = 0; i < len; ++i) v[i] = h(j + 1 + i, j);
        const double alpha = norm2(v);
        if (alpha == 0.0) continue;
        const Complex phase = v[0] == Complex(0.0) ? Complex(1.0) : v[0] / std::abs(v[0]);
        v[0] += phase * alpha;
        const double vnorm = norm2(v);
        for (auto& x : v) x /= vnorm;

        // H <- (I - 2vv*) H
        for (std::size_t c = j; c < n; ++c) {
            Complex s = 0.0;
            for (std::size_t i = 0; i < len; ++i) s += std::conj(v[i]) * h(j + 1 + i, c);
            for (std::size_t i = 0; i < len; ++i) h(j + 1 + i, c) -= 2.0 * v[i] * s;
        }
        // H <- H (I - 2vv*), Z <- Z (I - 2vv*)
        auto right_apply = [&](Matrix& m) {
            for (std::size_t r = 0; r < m.rows(); ++r) {
                Complex s = 0.0;
                for (std::size_t i = 0; i < len; ++i) s += m(r, j + 1 + i) * v[i];
                for (std::size_t i = 0; i < len; ++i) m(r, j + 1 + i) -= 2.0 * s * std::conj(v[i]);
            }
        };
        right_apply(h);
        if (z) right_apply(*z);
        h(j + 1, j) = -phase * alpha;
        for (std::size_t i = j + 2; i < n; ++i) h(i, j) = 0.0;
    }
}

Complex wilkinson_shift(const Matrix& h, std::size_t hi) {
    const Complex a = h(hi - 1, hi - 1);
    const Complex b = h(hi - 1, hi);
    const Complex c = h(hi, hi - 1);
    const Complex d = h(hi, hi);
    const Complex half_diff = 0.5 * (a - d);
    const Complex disc = std::sqrt(half_diff * half_diff + b * c);
    const Complex mean = 0.5 * (a + d);
    const Complex e1 = mean + disc;
    const Complex e2 = mean - disc;
    return std::abs(e1 - d) <= std::abs(e2 - d) ? e1 : e2;
}

}  // namespace

Frame Frame::from_orthonormal(Matrix basis, double tol) {
    if (basis.cols() > basis.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "frame has more columns than rows");
    }
    const double err = orthonormality_error(basis);
    if (!(err <= tol)) {
        throw Error(ErrorKind::InvalidArgument, "columns are not orthonormal (error " + std::to_string(err) + ")");
    }
    return Frame(std::move(basis));
}

double orthonormality_error(const Matrix& v) {
    double err = 0.0;
    for (std::size_t i = 0; i < v.cols(); ++i) {
        for (std::size_t j = 0; j < v.cols(); ++j) {
            Complex s = 0.0;
            for (std::size_t r = 0; r < v.rows(); ++r) s += std::conj(v(r, i)) * v(r, j);
            if (i == j) s -= 1.0;
            err = std::max(err, std::abs(s));
        }
    }
    return err;
}

Frame qr_orthonormalize(const Matrix& vectors, double tol) {
    const std::size_t n = vectors.rows();
    const std::size_t k = vectors.cols();
    if (k > n) throw Error(ErrorKind::RankDeficient, "more vectors than dimensions");
    Matrix q(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<Complex> w = vectors.col(j);
        const double original = norm2(w);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                Complex r = 0.0;
                for (std::size_t t = 0; t < n; ++t) r += std::conj(q(t, i)) * w[t];
                for (std::size_t t = 0; t < n; ++t) w[t] -= r * q(t, i);
            }
        }
        const double residual = norm2(w);
        if (residual <= tol * original || residual == 0.0) {
            throw Error(ErrorKind::RankDeficient, "column " + std::to_string(j) + " is dependent on earlier columns");
        }
        for (std::size_t t = 0; t < n; ++t) q(t, j) = w[t] / residual;
    }
    return Frame::from_orthonormal(std::move(q));
}

HermitianEigen hermitian_eigs(const Matrix& h, const JacobiOptions& options) {
    require_square(h, "hermitian_eigs");
    const std::size_t n = h.rows();
    const double fro = h.frobenius_norm();
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) asym = std::max(asym, std::abs(h(i, j) - std::conj(h(j, i))));
    if (asym > options.hermitian_tol * fro) {
        throw Error(ErrorKind::NotHermitian, "||H - H*||_max = " + std::to_string(asym));
    }

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = h(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
            a(j, i) = std::conj(a(i, j));
        }
    }
    Matrix v = Matrix::identity(n);

    auto off_mass = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(2.0 * s);
    };

    bool converged = false;
    for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
        if (off_mass() <= options.tol * fro) {
            converged = true;
            break;
        }
        if (sweep == options.max_sweeps) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double g = std::abs(apq);
                if (g == 0.0) continue;
                const Complex phase_conj = std::conj(apq) / g;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * g);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 0.5 / tau;
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
                const Complex jpp = c;
                const Complex jpq = s;
                const Complex jqp = -s * phase_conj;
                const Complex jqq = c * phase_conj;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * g;
                a(q, q) = aqq + t * g;
            }
        }
    }
    if (!converged) {
        throw Error(ErrorKind::NoConvergence, "Jacobi did not converge in " + std::to_string(options.max_sweeps) +
                                                  " sweeps (off-diagonal mass " + std::to_string(off_mass()) + ")");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    HermitianEigen out{std::vector<double>(n), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

SchurForm schur(const Matrix& m, const QrOptions& options) {
    require_square(m, "schur");
    const std::size_t n = m.rows();
    Matrix h = m;
    Matrix z = Matrix::identity(n);
    reduce_to_hessenberg(h, &z);
    if (n <= 1) return {std::move(h), std::move(z)};

    const double hnorm = h.frobenius_norm();
    const std::size_t cap = options.iterations_per_eigenvalue * n;
    std::size_t total = 0;
    std::size_t stalled = 0;
    std::size_t hi = n - 1;
    std::vector<Givens> rotations;

    while (hi > 0) {
        std::size_t l = hi;
        while (l > 0) {
            double scale = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (scale == 0.0) scale = hnorm;
            if (std::abs(h(l, l - 1)) <= options.deflation * scale) {
                h(l, l - 1) = 0.0;
                break;
            }
            --l;
        }
        if (l == hi) {
            --hi;
            stalled = 0;
            continue;
        }
        if (total >= cap) {
            std::vector<Complex> partial(n);
            for (std::size_t i = 0; i < n; ++i) partial[i] = h(i, i);
            throw NoConvergence("complex QR exceeded " + std::to_string(cap) + " iterations", std::move(partial), hi + 1);
        }
        ++total;
        ++stalled;

        Complex mu;
        if (stalled == 10 || stalled == 20) {
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            mu = wilkinson_shift(h, hi);
        }

        for (std::size_t k = l; k <= hi; ++k) h(k, k) -= mu;
        rotations.clear();
        for (std::size_t k = l; k < hi; ++k) {
            const Givens g = make_givens(h(k, k), h(k + 1, k));
            rotations.push_back(g);
            for (std::size_t j = k; j < n; ++j) {
                const Complex x = h(k, j);
                const Complex y = h(k + 1, j);
                h(k, j) = g.c * x + g.s * y;
                h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
            h(k + 1, k) = 0.0;
        }
        for (std::size_t k = l; k < hi; ++k) {
            const Givens& g = rotations[k - l];
            for (std::size_t i = 0; i <= k + 1; ++i) {
                const Complex x = h(i, k);
                const Complex y = h(i, k + 1);
                h(i, k) = x * g.c + y * std::conj(g.s);
                h(i, k + 1) = -x * g.s + y * g.c;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const Complex x = z(i, k);
                const Complex y = z(i, k + 1);
                z(i, k) = x * g.c + y * std::conj(g.s);
                z(i, k + 1) = -x * g.s + y * g.c;
            }
        }
        for (std::size_t k = l; k <= hi; ++k) h(k, k) += mu;
    }
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;
    return {std::move(h), std::move(z)};
}

Matrix schur_eigenvectors(const SchurForm& form) {
    const Matrix& t = form.t;
    const std::size_t n = t.rows();
    const double small = kEps * std::max(1.0, t.frobenius_norm());
    Matrix y(n, n);
    std::vector<Complex> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), Complex(0.0));
        col[j] = 1.0;
        for (std::size_t ii = j; ii-- > 0;) {
            Complex s = 0.0;
            for (std::size_t l = ii + 1; l <= j; ++l) s += t(ii, l) * col[l];
            Complex denom = t(ii, ii) - t(j, j);
            if (std::abs(denom) < small) denom = small;
            col[ii] = -s / denom;
            const double big = std::abs(col[ii]);
            if (big > 1e100) {
                for (std::size_t l = ii; l <= j; ++l) col[l] /= big;
            }
        }
        std::vector<Complex> x = matvec(form.z, col);
        const double nx = norm2(x);
        for (std::size_t i = 0; i < n; ++i) y(i, j) = x[i] / nx;
    }
    return y;
}

bool complex_less(Complex a, Complex b) noexcept {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

EigenDecomposition general_eigs(const Matrix& m, const QrOptions& options) {
    require_square(m, "general_eigs");
    if (m.rows() == 0) throw Error(ErrorKind::InvalidArgument, "general_eigs needs k >= 1");
    const SchurForm form = schur(m, options);
    const std::size_t n = m.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return complex_less(form.t(x, x), form.t(y, y)); });
    EigenDecomposition out;
    out.values.reserve(n);
    for (std::size_t i : order) out.values.push_back(form.t(i, i));
    if (options.vectors) {
        const Matrix raw = schur_eigenvectors(form);
        Matrix sorted(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) sorted(i, j) = raw(i, order[j]);
        out.vectors = std::move(sorted);
    }
    return out;
}

double operator_norm(const Matrix& a) {
    if (a.empty()) return 0.0;
    const Matrix gram = a.adjoint() * a;
    const HermitianEigen e = hermitian_eigs(gram);
    return std::sqrt(std::max(0.0, e.values.back()));
}

double smallest_singular_value(const Matrix& m) {
    const std::size_t r = m.rows();
    const std::size_t c = m.cols();
    Matrix dilation(r + c, r + c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            dilation(i, r + j) = m(i, j);
            dilation(r + j, i) = std::conj(m(i, j));
        }
    }
    const HermitianEigen e = hermitian_eigs(dilation);
    // Eigenvalues are +-sigma_i (plus |r - c| zeros); the smallest sigma is the
    // smallest non-negative eigenvalue among the top min(r, c).
    const std::size_t k = std::min(r, c);
    return std::max(0.0, e.values[e.values.size() - k]);
}

std::vector<Complex> lu_solve(Matrix m, std::vector<Complex> b) {
    require_square(m, "lu_solve");
    const std::size_t n = m.rows();
    if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "lu_solve rhs length");
    const double small = kEps * std::max(1.0, m.frobenius_norm());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(b[k], b[piv]);
        }
        if (std::abs(m(k, k)) < small) m(k, k) = small;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = m(i, k) / m(k, k);
            if (f == Complex(0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
            b[i] -= f * b[k];
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        Complex s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= m(ii, j) * b[j];
        b[ii] = s / m(ii, ii);
    }
    return b;
}

std::vector<Complex> eigenvector_for(const Matrix& m, Complex lambda, int iterations) {
    require_square(m, "eigenvector_for");
    const std::size_t n = m.rows();
    Matrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = Complex(1.0, 0.5 / static_cast<double>(i + 1));
    for (int it = 0; it < iterations; ++it) {
        x = lu_solve(shifted, std::move(x));
        double nx = norm2(x);
        if (!std::isfinite(nx) || nx == 0.0) {
            // Overflowed on an exactly singular shift: restart from a unit vector.
            std::fill(x.begin(), x.end(), Complex(0.0));
            x[0] = 1.0;
            nx = 1.0;
        }
        for (auto& v : x) v /= nx;
    }
    return x;
}

std::vector<Complex> haar_unit_vector(std::size_t n, Rng& rng) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "haar_unit_vector needs n >= 1");
    std::vector<Complex> x(n);
    for (auto& z : x) z = rng.complex_normal();
    const double nx = norm2(x);
    for (auto& z : x) z /= nx;
    return x;
}

Frame haar_frame(std::size_t n, std::size_t k, Rng& rng) {
    if (k == 0 || k > n) throw Error(ErrorKind::InvalidArgument, "haar_frame needs 1 <= k <= n");
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return qr_orthonormalize(complex_gaussian_matrix(n, k, rng));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::RankDeficient) throw;
        }
    }
    throw Error(ErrorKind::RankDeficient, "haar_frame: 8 consecutive rank-deficient Gaussian draws");
}

}  // namespace nrange
