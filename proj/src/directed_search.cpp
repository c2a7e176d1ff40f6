#include "directed_search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nrange/linalg.hpp"

namespace nrange::detail {

namespace {

constexpr std::size_t kStepsPerChain = 64;
constexpr std::size_t kMaxChains = 256;

Matrix random_start(const Matrix& a, const SearchSetup& setup, Rng& rng) {
    const std::size_t n = a.rows();
    if (setup.structure == Structure::Frame) return haar_frame(n, setup.rank, rng).basis();
    const BlockPartition& part = *setup.partition;
    Matrix v(n, part.count());
    const auto fs = sample_block_vectors(part, rng);
    for (std::size_t i = 0; i < part.count(); ++i)
        for (std::size_t r = 0; r < fs[i].size(); ++r) v(part.offset(i) + r, i) = fs[i][r];
    return v;
}

std::size_t top_index(const std::vector<Complex>& eig, Complex direction) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < eig.size(); ++j)
        if ((direction * eig[j]).real() > (direction * eig[best]).real()) best = j;
    return best;
}

// Riemannian ascent direction of Re(direction * lambda) for the simple
// eigenvalue lambda of M = V* A V (or the block matrix, which has the same
// first-order form). Returns an empty matrix when no usable gradient exists.
Matrix ascent_direction(const Matrix& a, const SearchSetup& setup, const Matrix& v, const Matrix& m, Complex lambda,
                        Complex direction) {
    const std::vector<Complex> right = eigenvector_for(m, lambda);
    const std::vector<Complex> left = eigenvector_for(m.adjoint(), std::conj(lambda));
    const Complex overlap = dot(left, right);
    if (std::abs(overlap) < 1e-12) return {};
    const Complex alpha = direction / overlap;

    const std::vector<Complex> y = matvec(a, matvec(v, right));
    const std::vector<Complex> w = matvec(a.adjoint(), matvec(v, left));
    const std::size_t n = v.rows();
    const std::size_t k = v.cols();
    Matrix g(n, k);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < k; ++c)
            g(r, c) = alpha * y[r] * std::conj(left[c]) + std::conj(alpha) * w[r] * std::conj(right[c]);

    if (setup.structure == Structure::Frame) {
        // Tangent space of the Stiefel manifold: drop V * herm(V* G).
        const Matrix vg = v.adjoint() * g;
        Matrix sym = vg + vg.adjoint();
        sym *= 0.5;
        g -= v * sym;
    } else {
        const BlockPartition& part = *setup.partition;
        for (std::size_t c = 0; c < k; ++c) {
            Complex radial = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const bool inside = r >= part.offset(c) && r < part.offset(c) + part.size(c);
                if (!inside) g(r, c) = 0.0;
                radial += std::conj(v(r, c)) * g(r, c);
            }
            const double re = radial.real();
            for (std::size_t r = part.offset(c); r < part.offset(c) + part.size(c); ++r) g(r, c) -= re * v(r, c);
        }
    }
    return g;
}

std::optional<Matrix> retract(const SearchSetup& setup, const Matrix& v, const Matrix& step) {
    Matrix moved = v + step;
    if (setup.structure == Structure::Frame) {
        try {
            return qr_orthonormalize(moved).basis();
        } catch (const Error&) {
            return std::nullopt;
        }
    }
    const BlockPartition& part = *setup.partition;
    for (std::size_t c = 0; c < part.count(); ++c) {
        double s = 0.0;
        for (std::size_t r = part.offset(c); r < part.offset(c) + part.size(c); ++r) s += std::norm(moved(r, c));
        s = std::sqrt(s);
        if (s == 0.0) return std::nullopt;
        for (std::size_t r = part.offset(c); r < part.offset(c) + part.size(c); ++r) moved(r, c) /= s;
    }
    return moved;
}

}  // namespace

void directed_search(const Matrix& a, const SearchSetup& setup, const Evaluate& evaluate, const Emit& emit) {
    const std::size_t total = setup.evaluations;
    if (total == 0) return;
    const std::size_t chains = std::clamp<std::size_t>(total / kStepsPerChain, 1, kMaxChains);
    const double scale = std::max(1.0, a.frobenius_norm());
    std::size_t draw = setup.first_draw;

    for (std::size_t chain = 0; chain < chains; ++chain) {
        const std::size_t budget = total / chains + (chain < total % chains ? 1 : 0);
        Rng rng(setup.seed, kDirectedStreamBase + chain);
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(chain) + rng.uniform()) /
                             static_cast<double>(chains);
        const Complex direction = std::polar(1.0, theta);

        std::size_t used = 0;
        Matrix v;
        Matrix m;
        std::vector<Complex> eig;
        double best = 0.0;
        double eta = 0.5;
        auto evaluate_and_emit = [&](const Matrix& candidate, Matrix& m_out, std::vector<Complex>& eig_out) {
            m_out = evaluate(candidate);
            eig_out = general_eigs(m_out).values;
            emit(draw++, candidate, m_out, eig_out);
            ++used;
            return (direction * eig_out[top_index(eig_out, direction)]).real();
        };
        auto restart = [&] {
            v = random_start(a, setup, rng);
            best = evaluate_and_emit(v, m, eig);
            eta = 0.5;
        };

        restart();
        while (used < budget) {
            const Complex lambda = eig[top_index(eig, direction)];
            Matrix g = ascent_direction(a, setup, v, m, lambda, direction);
            const double gn = g.empty() ? 0.0 : g.frobenius_norm();
            if (!(gn > 1e-14 * scale)) {
                restart();
                continue;
            }
            g *= eta / gn;
            const std::optional<Matrix> next = retract(setup, v, g);
            if (!next) {
                eta *= 0.5;
                if (eta < 1e-8) restart();
                continue;
            }
            Matrix m_next;
            std::vector<Complex> eig_next;
            const double value = evaluate_and_emit(*next, m_next, eig_next);
            if (value > best) {
                best = value;
                v = *next;
                m = std::move(m_next);
                eig = std::move(eig_next);
                eta = std::min(1.0, eta * 1.5);
            } else {
                eta *= 0.5;
                if (eta < 1e-8 && used < budget) restart();
            }
        }
    }
}

}  // namespace nrange::detail
