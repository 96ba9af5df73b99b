#pragma once

#include <vector>

#include "nhsym/core.hpp"

namespace nhsym {

/// exp(A) by scaling and squaring with a diagonal Pade approximant of
/// degree 3, 5, 7, 9 or 13, chosen from ||A||_1 (Higham 2005 thresholds).
Matrix expm(const Matrix& a);

/// Largest eigenvalue of the Hermitian generator (H - H^dagger)/(i hbar);
/// N(t) <= exp(rate * t) for any normalized initial state.
double max_norm_growth_rate(const Matrix& h, double hbar);

struct MultisetMatch {
    /// pairs[i] = index in b matched to a[i].
    std::vector<Index> pairs;
    double max_distance = 0.0;
};

/// Matches two equally sized complex multisets by repeatedly taking the
/// globally closest unmatched pair.
MultisetMatch match_multisets(const Vector& a, const Vector& b);

/// max_j min-matched |a_j - b_pi(j)|; infinity on size mismatch.
double multiset_distance(const Vector& a, const Vector& b);

}  // namespace nhsym
