#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynreg/embedded.hpp"
#include "dynreg/haar.hpp"
#include "dynreg/precond.hpp"
#include "dynreg/rng.hpp"
#include "oracle.hpp"

using namespace dynreg;

namespace {

ComparatorSeq random_sequence(std::size_t T, std::size_t d, Rng& rng) {
    ComparatorSeq seq(T, std::vector<double>(d));
    for (auto& u : seq)
        for (auto& x : u) x = normal(rng);
    return seq;
}

}  // namespace

TEST_CASE("haar_matrix reproduces the small orders") {
    const auto h0 = haar_matrix(0);
    CHECK(h0.rows() == 1);
    CHECK(h0(0, 0) == 1.0);

    const auto h1 = haar_matrix(1);
    CHECK(h1(0, 0) == 1.0);
    CHECK(h1(0, 1) == 1.0);
    CHECK(h1(1, 0) == 1.0);
    CHECK(h1(1, 1) == -1.0);

    const double expect2[4][4] = {
        {1, 1, 1, 0}, {1, 1, -1, 0}, {1, -1, 0, 1}, {1, -1, 0, -1}};
    const auto h2 = haar_matrix(2);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(h2(i, j) == expect2[i][j]);

    CHECK_THROWS_AS(haar_matrix(13), std::invalid_argument);
}

TEST_CASE("haar columns are orthogonal with the stated norms") {
    for (std::size_t n = 0; n <= 6; ++n) {
        const auto h = haar_matrix(n);
        const std::size_t T = h.rows();
        for (std::size_t a = 0; a < T; ++a) {
            for (std::size_t b = a; b < T; ++b) {
                double acc = 0.0;
                for (std::size_t i = 0; i < T; ++i) acc += h(i, a) * h(i, b);
                if (a == b)
                    CHECK(acc == haar_scale_sq(a, n));
                else
                    CHECK(acc == 0.0);
            }
        }
    }
}

TEST_CASE("haar_transpose_apply matches the dense product") {
    std::vector<double> v{1.0, 1.0}, out(2);
    haar_transpose_apply(v, out);
    CHECK(out[0] == 2.0);
    CHECK(out[1] == 0.0);

    std::vector<double> v4{1.0, 2.0, 3.0, 4.0}, out4(4);
    haar_transpose_apply(v4, out4);
    CHECK(out4[0] == 10.0);
    CHECK(out4[1] == -4.0);
    CHECK(out4[2] == -1.0);
    CHECK(out4[3] == -1.0);

    std::vector<double> z(8, 0.0), zout(8);
    haar_transpose_apply(z, zout);
    for (double x : zout) CHECK(x == 0.0);

    std::vector<double> bad(3), badout(3);
    CHECK_THROWS_AS(haar_transpose_apply(bad, badout), std::invalid_argument);

    Rng rng(2);
    for (std::size_t n = 0; n <= 8; ++n) {
        const std::size_t T = std::size_t{1} << n;
        const auto h = haar_matrix(n);
        const auto ht = h.transpose();
        std::vector<double> x(T), fast(T), dense(T);
        for (auto& xi : x) xi = normal(rng);
        haar_transpose_apply(x, fast);
        ht.multiply(x, dense);
        for (std::size_t i = 0; i < T; ++i)
            CHECK(fast[i] == doctest::Approx(dense[i]).epsilon(1e-12));
        // and the forward transform
        haar_apply(x, fast);
        h.multiply(x, dense);
        for (std::size_t i = 0; i < T; ++i)
            CHECK(fast[i] == doctest::Approx(dense[i]).epsilon(1e-12));
    }
}

TEST_CASE("haar_row gives the sparse support of each row") {
    const auto r1 = haar_row(0, 2);
    REQUIRE(r1.size() == 3);
    CHECK(r1[0].index == 0);
    CHECK(r1[0].value == 1.0);
    CHECK(r1[1].index == 1);
    CHECK(r1[1].value == 1.0);
    CHECK(r1[2].index == 2);
    CHECK(r1[2].value == 1.0);

    const auto r4 = haar_row(3, 2);
    REQUIRE(r4.size() == 3);
    CHECK(r4[0].index == 0);
    CHECK(r4[0].value == 1.0);
    CHECK(r4[1].index == 1);
    CHECK(r4[1].value == -1.0);
    CHECK(r4[2].index == 3);
    CHECK(r4[2].value == -1.0);

    const auto r0 = haar_row(0, 0);
    REQUIRE(r0.size() == 1);
    CHECK(r0[0].index == 0);
    CHECK(r0[0].value == 1.0);

    for (std::size_t n = 0; n <= 10; ++n) {
        const std::size_t T = std::size_t{1} << n;
        const auto dense = n <= 6 ? haar_matrix(n) : DenseMatrix();
        for (std::size_t t = 0; t < T; ++t) {
            const auto row = haar_row(t, n);
            CHECK(row.size() == 1 + n);
            for (const auto& [idx, val] : row) CHECK(std::fabs(val) == 1.0);
            if (n <= 6) {
                std::vector<double> full(T, 0.0);
                for (const auto& [idx, val] : row) full[idx] = val;
                for (std::size_t j = 0; j < T; ++j) CHECK(full[j] == dense(t, j));
            }
        }
    }
}

TEST_CASE("hht diagonal and block recursion") {
    CHECK(hht_diag(2) == 3.0);
    CHECK(hht_diag(0) == 1.0);
    CHECK(hht_diag(8) == 9.0);
    {
        const auto h = haar_matrix(8);
        const auto hht = h * h.transpose();
        for (std::size_t i = 0; i < hht.rows(); ++i) CHECK(hht(i, i) == 9.0);
    }
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto h = haar_matrix(n);
        const auto hht = h * h.transpose();
        const auto prev = haar_matrix(n - 1);
        const auto sub = prev * prev.transpose();
        const std::size_t half = std::size_t{1} << (n - 1);
        for (std::size_t i = 0; i < 2 * half; ++i) {
            for (std::size_t j = 0; j < 2 * half; ++j) {
                const bool same_block = (i < half) == (j < half);
                if (!same_block) {
                    CHECK(hht(i, j) == 0.0);
                } else {
                    CHECK(hht(i, j) == sub(i % half, j % half) + 1.0);
                }
            }
        }
    }
}

TEST_CASE("haar_comparator_norm_sq on pinned sequences") {
    CHECK(haar_comparator_norm_sq({{1.0}, {1.0}, {1.0}, {1.0}}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(haar_comparator_norm_sq({{1.0}, {1.0}, {-1.0}, {-1.0}}) ==
          doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(4);
    for (int rep = 0; rep < 5; ++rep) {
        const double u1 = normal(rng), u2 = normal(rng), u3 = normal(rng), u4 = normal(rng);
        const double expect = std::pow((u1 + u2 + u3 + u4) / 4.0, 2) +
                              std::pow((u1 + u2 - u3 - u4) / 4.0, 2) +
                              std::pow((u1 - u2) / 2.0, 2) + std::pow((u3 - u4) / 2.0, 2);
        CHECK(haar_comparator_norm_sq({{u1}, {u2}, {u3}, {u4}}) ==
              doctest::Approx(expect).epsilon(1e-12));
    }

    CHECK_THROWS_AS(haar_comparator_norm_sq({{1.0}, {1.0}, {1.0}}), std::invalid_argument);
}

TEST_CASE("haar norm agrees with the dense inverse quadratic form") {
    Rng rng(6);
    for (std::size_t n = 1; n <= 5; ++n) {
        const std::size_t T = std::size_t{1} << n;
        const auto h = haar_matrix(n);
        const auto sinv_dense = oracle::invert(h * h.transpose());
        for (std::size_t d : {1, 2}) {
            const auto seq = random_sequence(T, d, rng);
            const auto u = embed_comparator(seq);
            const auto m = oracle::kron_with_identity(sinv_dense, d);
            const double expect = oracle::quad_form(m, u.flat());
            CHECK(haar_comparator_norm_sq(seq) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("timescale path lengths") {
    const ComparatorSeq constant{{2.0}, {2.0}, {2.0}, {2.0}};
    for (std::size_t tau : {1, 2}) CHECK(timescale_path_length(constant, tau) == 0.0);
    CHECK(timescale_path_length(constant, 4) == 4.0);  // ||u bar||^2

    CHECK(timescale_path_length({{0.0}, {0.0}, {2.0}, {2.0}}, 2) == 4.0);
    CHECK(timescale_path_length({{1.0}, {-1.0}, {1.0}, {-1.0}}, 1) == 8.0);

    CHECK_THROWS_AS(timescale_path_length(constant, 3), std::invalid_argument);
    CHECK_THROWS_AS(timescale_path_length(constant, 8), std::invalid_argument);
}

TEST_CASE("norm decomposition across timescales") {
    Rng rng(8);
    for (std::size_t T : {2, 4, 8, 16, 32, 64, 128, 256}) {
        for (std::size_t d : {1, 3}) {
            const auto seq = random_sequence(T, d, rng);
            double sum = timescale_path_length(seq, T);  // ||u bar||^2
            for (std::size_t tau = 1; tau < T; tau *= 2)
                sum += 0.25 * timescale_path_length(seq, tau);
            CHECK(haar_comparator_norm_sq(seq) == doctest::Approx(sum).epsilon(1e-10));
        }
    }
}

TEST_CASE("embedded loss dual norm under the haar pairing") {
    Rng rng(9);
    for (std::size_t n : {2, 4, 6}) {
        const std::size_t T = std::size_t{1} << n;
        HaarPreconditioner s(T);
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<double> g{normal(rng), normal(rng), normal(rng)};
            const auto gt = embed_loss(t, g, T);
            const double expect = (1.0 + n) * norm_sq(std::span<const double>(g));
            CHECK(dual_weighted_norm_sq(gt, s) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("haar pairing applies agree with dense materializations") {
    Rng rng(10);
    for (std::size_t n = 0; n <= 5; ++n) {
        const std::size_t T = std::size_t{1} << n;
        HaarPreconditioner s(T);
        const auto h = haar_matrix(n);
        const auto hht = h * h.transpose();
        const auto sd = oracle::invert(hht);
        std::vector<double> x(T), got(T), expect(T);
        for (int rep = 0; rep < 4; ++rep) {
            for (auto& xi : x) xi = normal(rng);
            s.apply(x, got);
            sd.multiply(x, expect);
            for (std::size_t i = 0; i < T; ++i)
                CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-10));
            s.apply_inverse(x, got);
            hht.multiply(x, expect);
            for (std::size_t i = 0; i < T; ++i)
                CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-10));
        }
        std::vector<double> col(T);
        for (std::size_t t = 0; t < T; ++t) {
            s.inverse_column(t, col);
            for (std::size_t i = 0; i < T; ++i)
                CHECK(col[i] == doctest::Approx(hht(i, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("TimescalePartition covers the horizon") {
    TimescalePartition part(16, 4);
    REQUIRE(part.intervals.size() == 4);
    std::size_t covered = 0;
    for (const auto& [b, e] : part.intervals) covered += e - b;
    CHECK(covered == 16);
    CHECK(part.intervals.front().first == 0);
    CHECK(part.intervals.back().second == 16);
}

TEST_CASE("pow2 helpers") {
    CHECK(log2_exact(1) == 0);
    CHECK(log2_exact(256) == 8);
    CHECK_THROWS_AS(log2_exact(12), std::invalid_argument);
    CHECK(next_pow2(1) == 1);
    CHECK(next_pow2(5) == 8);
    CHECK(next_pow2(64) == 64);
}
