#pragma once

#include <cstdint>
#include <map>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

#include "tilecensus/domain.hpp"
#include "tilecensus/parallel.hpp"

namespace tilecensus::entropy {

using BigInt = boost::multiprecision::cpp_int;

// Largest product of m nonnegative integers summing to t: writing
// t = a m + b with 0 <= b < m, it is (a+1)^b a^(m-b).
BigInt jensen_max_product(int m, int t);

// Per-cell bits (r log2(N+1) + (1-r) log2 N) / rho for rho = N + r, rho >= 1.
double interpolated_rate(double rho);

struct IntegerRate {
    int argmax = 0;
    double value = 0.0;  // max over N of N^(1/N)
};

// Scans N in [1, 64].
IntegerRate best_integer_rate();

// f(r) = (N+1)^(r/(N+r)) * N^((1-r)/(N+r)).
double endpoint_f(int N, double r);

// max(f(0), f(1)) minus the maximum of f over a uniform grid on [0, 1].
double endpoint_lemma_gap(int N, int grid);

double binary_entropy(double alpha);

struct BoundParams {
    std::int64_t n = 1;
    int d = 1;
    std::int64_t k = 3;
    double alpha = 0.1;
    std::int64_t ell = 1;
    // Constant in the exponent of the (k^d v_n)^{O(k^d)} sequence count.
    double seq_const = 1.0;
    // Periodic boundary: no translate leaves the region, so J = 0.
    bool torus_mode = false;
};

// ceil(n^(1/(2d))), the block scale that makes the bound converge.
std::int64_t default_block_scale(std::int64_t n, int d);

struct PackingSlack {
    double j_exact_bound = 0.0;  // ((k+2)^d - (k-2)^d) / alpha
    double j_simplified = 0.0;   // 5 d k^(d-1) / alpha
};

PackingSlack packing_slack(const BoundParams& p);

struct RateReport {
    double ratio = 0.0;
    double j_bound = 0.0;
    double bits_per_cell = 0.0;
    double total_log2_bound = 0.0;
};

RateReport entropy_upper(const BoundParams& p);

// log2 of  2^{H(alpha) v} + (k^d v)^{c k^d} 2^{(k^d / (k^d - 5 d k^{d-1}/alpha)) log2(3)/3 v}
// evaluated in log space. p.ell is ignored.
double total_count_log2(const BoundParams& p);

struct ShearerResult {
    std::map<std::size_t, std::uint64_t> a_sizes;  // |A_j| -> number of cells j
    bool coverage_ok = false;
    double bound_bits = 0.0;
    std::size_t ell = 0;
    std::size_t j_boundary = 0;
    std::uint64_t sum_a_sizes = 0;
};

// Shearer-type bound (1/(l-J)) sum_j log2 |A_j| for a concrete tiling of the
// region [0, k n)^d (a torus when torus_mode) by s + z_i. Throws not_a_tiling
// when some cell is covered other than exactly once.
ShearerResult shearer_bound_from_instance(const Tile& s, std::span<const Point> translations, std::int64_t k,
                                          bool torus_mode, const TaskPool& pool = TaskPool(1));

// Pairwise summation; the split points depend only on the length.
double pairwise_sum(std::span<const double> xs);

}  // namespace tilecensus::entropy
