#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nrange/projections.hpp"
#include "test_support.hpp"

using namespace nrange;
using nrange::testing::bottleneck;
using nrange::testing::random_hermitian;
using nrange::testing::random_matrix;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double idempotence_error(const Projection& p) {
    const Matrix op = p.as_operator();
    return max_abs_diff(op * op, op);
}

bool has_projection(const std::vector<Projection>& ps, const Matrix& expected) {
    for (const auto& p : ps)
        if (p.rank() == static_cast<std::size_t>(expected.trace().real() + 0.5) &&
            max_abs_diff(p.as_operator(), expected) <= 1e-10)
            return true;
    return false;
}

Matrix diag_op(std::initializer_list<double> d) {
    std::vector<Complex> v(d.begin(), d.end());
    return Matrix::diagonal(v);
}

}  // namespace

TEST_CASE("projection_from_span examples") {
    const Projection p1 = projection_from_span(Matrix{{1.0}, {0.0}});
    CHECK(max_abs_diff(p1.as_operator(), diag_op({1, 0})) <= 1e-15);

    const Projection p2 = projection_from_span(Matrix{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}});
    CHECK(max_abs_diff(p2.as_operator(), Matrix::identity(2)) <= 1e-12);

    const Projection p3 = projection_from_span(Matrix{{1.0}, {1.0}, {0.0}});
    const Matrix expected{{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 0.0}};
    CHECK(max_abs_diff(p3.as_operator(), expected) <= 1e-15);

    CHECK_THROWS_AS(projection_from_span(Matrix{{1.0, 2.0}, {1.0, 2.0}}), Error);
}

TEST_CASE("projection_from_span reproduces its input columns") {
    Rng rng(3);
    const Matrix g = complex_gaussian_matrix(6, 3, rng);
    const Projection p = projection_from_span(g);
    const Matrix op = p.as_operator();
    for (std::size_t j = 0; j < 3; ++j) {
        const auto c = g.col(j);
        const auto pc = matvec(op, c);
        double err = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) err += std::norm(pc[i] - c[i]);
        CHECK(std::sqrt(err) <= 1e-10 * norm2(c));
    }
    CHECK(idempotence_error(p) <= 1e-11);
}

TEST_CASE("compress examples") {
    const Matrix a{{1.0, 2.0}, {3.0, 4.0}};
    const Matrix c1 = compress(a, projection_from_span(Matrix{{1.0}, {0.0}}));
    CHECK(c1.rows() == 1);
    CHECK(std::abs(c1(0, 0) - Complex(1.0)) <= 1e-15);

    const Matrix c2 = compress(a, projection_from_span(Matrix{{1.0}, {1.0}}));
    CHECK(std::abs(c2(0, 0) - Complex(5.0)) <= 1e-14);

    Rng rng(5);
    const Matrix b = random_matrix(5, rng);
    const Matrix full = compress(b, Projection(haar_frame(5, 5, rng)));
    CHECK(bottleneck(general_eigs(full).values, general_eigs(b).values) <= 1e-9);

    CHECK_THROWS_AS(compress(Matrix::identity(3), projection_from_span(Matrix{{1.0}, {0.0}})), Error);
}

TEST_CASE("compression_coefficients is the transpose") {
    Rng rng(8);
    const Matrix a = random_matrix(4, rng);
    const Projection p(haar_frame(4, 2, rng));
    CHECK(compression_coefficients(a, p) == compress(a, p).transpose());
}

TEST_CASE("compress is basis independent (property)") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = random_matrix(6, rng);
        const Frame v = haar_frame(6, 3, rng);
        const Frame u = haar_frame(3, 3, rng);
        const Projection p(v);
        const Projection q(Frame::from_orthonormal(v.basis() * u.basis(), 1e-11));
        CHECK(bottleneck(general_eigs(compress(a, p)).values, general_eigs(compress(a, q)).values) <= 1e-9);
    }
}

TEST_CASE("compression eigenvalues are Rayleigh quotients (property)") {
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = random_matrix(5, rng);
        const Projection p(haar_frame(5, 3, rng));
        const Matrix m = compress(a, p);
        EigenDecomposition e = general_eigs(m, {.vectors = true});
        for (std::size_t j = 0; j < e.values.size(); ++j) {
            const auto y = matvec(p.basis(), e.vectors->col(j));
            CHECK(std::abs(quadratic_form(a, y) - e.values[j]) <= 1e-9);
        }
    }
}

TEST_CASE("sample_rank_k") {
    const auto full = sample_rank_k(3, 3, 5, 1);
    for (const auto& p : full) CHECK(max_abs_diff(p.as_operator(), Matrix::identity(3)) <= 1e-11);

    const auto a = sample_rank_k(5, 2, 3, 99);
    const auto b = sample_rank_k(5, 2, 3, 99);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a[i].basis() == b[i].basis());
    CHECK(sample_rank_k_draw(5, 2, 99, 2).basis() == a[2].basis());

    const auto many = sample_rank_k(4, 2, 10000, 7);
    double mean = 0.0;
    for (const auto& p : many) {
        mean += p.as_operator()(0, 0).real();
        CHECK(idempotence_error(p) <= 1e-11);
    }
    mean /= static_cast<double>(many.size());
    CHECK(std::abs(mean - 0.5) <= 0.02);

    CHECK_THROWS_AS(sample_rank_k(3, 4, 1, 0), Error);
    CHECK_THROWS_AS(sample_rank_k(3, 1, 0, 0), Error);
}

TEST_CASE("block_projection examples") {
    const BlockPartition ones = BlockPartition::ones(2);
    const std::vector<std::vector<Complex>> f1{{1.0}, {1.0}};
    CHECK(block_projection(ones, f1).as_operator() == Matrix::identity(2));

    const std::vector<std::vector<Complex>> f2{{1.0, 0.0}, {1.0}};
    CHECK(block_projection(BlockPartition({2, 1}), f2).as_operator() == diag_op({1, 0, 1}));

    const std::vector<std::vector<Complex>> f3{{kInvSqrt2, kInvSqrt2}, {Complex(kInvSqrt2), Complex(0, -kInvSqrt2)}};
    const Projection p3 = block_projection(BlockPartition({2, 2}), f3);
    CHECK(max_abs_diff(p3.basis().adjoint() * p3.basis(), Matrix::identity(2)) <= 1e-14);
    CHECK(p3.basis()(0, 1) == Complex(0.0));
    CHECK(p3.basis()(2, 0) == Complex(0.0));
}

TEST_CASE("block_projection embeds the block vectors bitwise") {
    Rng rng(4);
    const BlockPartition part({3, 1, 2});
    for (int trial = 0; trial < 20; ++trial) {
        const auto fs = sample_block_vectors(part, rng);
        const Projection p = block_projection(part, fs);
        for (std::size_t i = 0; i < part.count(); ++i)
            for (std::size_t r = 0; r < part.size(i); ++r) CHECK(p.basis()(part.offset(i) + r, i) == fs[i][r]);
        CHECK(idempotence_error(p) <= 1e-11);
    }
}

TEST_CASE("block_projection rejects bad input") {
    const BlockPartition part({2, 1});
    const std::vector<std::vector<Complex>> off_unit{{1.0, 1e-4}, {1.0}};
    try {
        block_projection(part, off_unit);
        FAIL("expected NotUnit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotUnit);
    }
    const std::vector<std::vector<Complex>> wrong_len{{1.0}, {1.0}};
    CHECK_THROWS_AS(block_projection(part, wrong_len), Error);
    const std::vector<std::vector<Complex>> too_few{{1.0, 0.0}};
    CHECK_THROWS_AS(block_projection(part, too_few), Error);
}

TEST_CASE("block partitions") {
    const BlockPartition p({2, 1, 3});
    CHECK(p.count() == 3);
    CHECK(p.total() == 6);
    CHECK(p.offset(2) == 3);
    CHECK(BlockPartition({1, 1, 1, 1, 2}).refines(BlockPartition({2, 2, 2})));
    CHECK_FALSE(BlockPartition({1, 2, 1, 2}).refines(BlockPartition({2, 2, 2})));
    CHECK(p.refines(BlockPartition::single(6)));
    CHECK_THROWS_AS(BlockPartition({2, 0}), Error);
    CHECK_THROWS_AS(p.require_total(5), Error);
}

TEST_CASE("commuting_projections examples") {
    const auto ps = commuting_projections(diag_op({1, 2, 3}));
    CHECK(ps.size() == 6);
    CHECK(has_projection(ps, diag_op({1, 0, 0})));
    CHECK(has_projection(ps, diag_op({0, 1, 0})));
    CHECK(has_projection(ps, diag_op({0, 0, 1})));
    CHECK(has_projection(ps, diag_op({1, 1, 0})));
    CHECK(has_projection(ps, diag_op({1, 0, 1})));
    CHECK(has_projection(ps, diag_op({0, 1, 1})));

    const Matrix swap{{0.0, 1.0}, {1.0, 0.0}};
    const auto qs = commuting_projections(swap);
    CHECK(qs.size() == 2);
    const Matrix plus{{0.5, 0.5}, {0.5, 0.5}};
    const Matrix minus{{0.5, -0.5}, {-0.5, 0.5}};
    CHECK(has_projection(qs, plus));
    CHECK(has_projection(qs, minus));
    for (const auto& q : qs) CHECK(commutator_norm(swap, q) <= 1e-12);

    const Matrix blocky{{0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 5.0}};
    const Projection user = projection_from_span(Matrix{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}});
    CHECK(commutator_norm(blocky, user) == 0.0);
    const std::vector<Projection> supplied{user};
    CHECK_NOTHROW(validate_commuting(blocky, supplied, 1e-9));
}

TEST_CASE("commuting_projections errors") {
    const Matrix jordan{{0.0, 1.0}, {0.0, 0.0}};
    try {
        commuting_projections(jordan);
        FAIL("expected NotNormal");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotNormal);
    }
    const std::vector<Projection> bad{projection_from_span(Matrix{{1.0}, {1.0}})};
    try {
        validate_commuting(jordan, bad, 1e-9);
        FAIL("expected ValidationFailed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ValidationFailed);
    }
}

TEST_CASE("commuting_projections clusters repeated eigenvalues") {
    const auto ps = commuting_projections(diag_op({1, 1, 2}));
    CHECK(ps.size() == 2);
    CHECK(has_projection(ps, diag_op({1, 1, 0})));
    CHECK(has_projection(ps, diag_op({0, 0, 1})));
    CHECK(commuting_projections(Matrix::identity(3)).size() == 1);
}

TEST_CASE("commuting_projections on random normal matrices (property)") {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const Frame u = haar_frame(5, 5, rng);
        std::vector<Complex> d(5);
        for (auto& x : d) x = rng.complex_normal();
        const Matrix a = u.basis() * Matrix::diagonal(d) * u.basis().adjoint();
        const auto ps = commuting_projections(a);
        CHECK(ps.size() == 30);
        for (const auto& p : ps) {
            CHECK(commutator_norm(a, p) <= 1e-9 * a.frobenius_norm());
            CHECK(idempotence_error(p) <= 1e-11);
        }
    }
    const Matrix h = random_hermitian(4, rng);
    CHECK(commuting_projections(h).size() == 14);
}

TEST_CASE("commuting_projections samples subsets past the enumeration limit") {
    std::vector<Complex> d(14);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<double>(i);
    const Matrix a = Matrix::diagonal(d);
    CommutingOptions opts;
    opts.budget = 40;
    const auto ps = commuting_projections(a, opts);
    CHECK(ps.size() >= 14);
    CHECK(ps.size() <= 54);
    const auto again = commuting_projections(a, opts);
    REQUIRE(again.size() == ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) CHECK(again[i].basis() == ps[i].basis());
}

TEST_CASE("family validation") {
    CHECK_THROWS_AS(FamilySpec::rank_k(0, 10, 0).validate(3), Error);
    CHECK_THROWS_AS(FamilySpec::rank_k(4, 10, 0).validate(3), Error);
    CHECK_NOTHROW(FamilySpec::rank_k(3, 10, 0).validate(3));
    CHECK_THROWS_AS(FamilySpec::block(BlockPartition({1, 1}), 10, 0).validate(3), Error);
    CHECK_NOTHROW(FamilySpec::block(BlockPartition({1, 2}), 10, 0).validate(3));
}
