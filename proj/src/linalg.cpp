#include "nhsym/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

namespace nhsym {

namespace {

constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                        2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13{64764752532480000.0,
                                         32382376266240000.0,
                                         7771770303897600.0,
                                         1187353796428800.0,
                                         129060195264000.0,
                                         10559470521600.0,
                                         670442572800.0,
                                         33522128640.0,
                                         1323241920.0,
                                         40840800.0,
                                         960960.0,
                                         16380.0,
                                         182.0,
                                         1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Low-degree approximant r_m = q_m^-1 p_m with p_m = U + V, q_m = -U + V.
template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
    const Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix even = b[0] * id;
    Matrix odd = b[1] * id;
    Matrix power = id;
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        even += b[k] * power;
        if (k + 1 < N) odd += b[k + 1] * power;
    }
    const Matrix u = a * odd;
    return (even - u).partialPivLu().solve(even + u);
}

Matrix pade13(const Matrix& a) {
    const auto& b = kPade13;
    const Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Matrix expm(const Matrix& a) {
    if (a.rows() != a.cols()) throw InvalidArgument("expm: matrix must be square");
    if (a.size() == 0) return a;
    if (!a.allFinite()) throw InvalidArgument("expm: non-finite entries");
    const double norm = one_norm(a);
    if (norm <= kTheta3) return pade_low(a, kPade3);
    if (norm <= kTheta5) return pade_low(a, kPade5);
    if (norm <= kTheta7) return pade_low(a, kPade7);
    if (norm <= kTheta9) return pade_low(a, kPade9);
    int squarings = 0;
    if (norm > kTheta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    Matrix r = pade13(a / std::ldexp(1.0, squarings));
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

double max_norm_growth_rate(const Matrix& h, double hbar) {
    const Matrix gen = (h - h.adjoint()) / cplx(0.0, hbar);
    const Matrix herm = 0.5 * (gen + gen.adjoint());
    const Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

MultisetMatch match_multisets(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw InvalidArgument("match_multisets: size mismatch");
    const Index n = a.size();
    std::vector<std::tuple<double, Index, Index>> candidates;
    candidates.reserve(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) candidates.emplace_back(std::abs(a[i] - b[j]), i, j);
    }
    std::sort(candidates.begin(), candidates.end());
    MultisetMatch m;
    m.pairs.assign(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    Index matched = 0;
    for (const auto& [d, i, j] : candidates) {
        if (matched == n) break;
        auto& slot = m.pairs[static_cast<std::size_t>(i)];
        if (slot >= 0 || used[static_cast<std::size_t>(j)]) continue;
        slot = j;
        used[static_cast<std::size_t>(j)] = true;
        m.max_distance = std::max(m.max_distance, d);
        ++matched;
    }
    return m;
}

double multiset_distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    return match_multisets(a, b).max_distance;
}

}  // namespace nhsym
