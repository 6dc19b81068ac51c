#pragma once

#include <gmpxx.h>

#include <vector>

#include "wlforge/coloring.hpp"
#include "wlforge/graph.hpp"
#include "wlforge/matrix.hpp"

namespace wlforge {

// The simulation path runs entirely in arbitrary-precision rationals; every
// equivalence claim it supports is exact, never tolerance-based.
using Rational = mpq_class;
using RatMatrix = Matrix<Rational>;

int rational_rank(RatMatrix m);
Coloring rational_row_partition(const RatMatrix& f);

// One-hot encoding of integer labels (columns ordered by first occurrence);
// rows are linearly independent modulo equality by construction.
RatMatrix one_hot_rational(const std::vector<int>& labels);

// Given an integer matrix B (s x t, entries in 0..n-1, pairwise distinct
// rows), builds X (t x s) such that sgn(B X - J) is a +-1 staircase up to row
// permutation and hence non-singular. The witness uses the base-n row
// encoding b = Bz and harmonic-midpoint thresholds between consecutive 1/b.
RatMatrix dist2lu(const Matrix<long long>& b, long long n);

struct UncoloredStep {
    RatMatrix w;       // weight block, padded to n output columns
    RatMatrix pre;     // A F W before sign and bias
    RatMatrix f_next;  // sgn(A F W - J), entries +-1
};

// One round of the constructive simulation on an uncolored feature matrix:
// the output partition equals the own-color-free refinement of the input
// partition, and the output is row-independent modulo equality. Requires the
// distinct rows of f to be linearly independent.
UncoloredStep simulate_step_uncolored(const Graph& g, const RatMatrix& f);

struct ColoredSimulation {
    RatMatrix f0;
    std::vector<RatMatrix> per_step_w;  // per_step_w[t-1] drives round t
    std::vector<RatMatrix> traces;      // traces[t], width <= 2n
};

// Runs T rounds with the initial one-hot block re-concatenated after every
// round; partition(traces[t]) matches the t-th color refinement round.
ColoredSimulation simulate_wl_colored(const Graph& g, const std::vector<int>& labels, int T);

struct ReluRound {
    RatMatrix layer_a_w2;  // first ReLU layer: f_odd = relu(A f W + J)
    Rational delta;        // smallest positive entry feeding the second layer
};

struct ReluSimulation {
    RatMatrix f0;
    std::vector<ReluRound> rounds;
    std::vector<RatMatrix> traces;  // traces[j] = f^{(j)}, j = 0..2T
};

// Sign steps replaced by two ReLU layers each; partition(traces[2t]) matches
// the t-th color refinement round.
ReluSimulation relu_simulation(const Graph& g, const std::vector<int>& labels, int T);

}  // namespace wlforge
