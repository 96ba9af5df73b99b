#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nhsym/core.hpp"
#include "nhsym/grid.hpp"
#include "nhsym/hamiltonian.hpp"
#include "nhsym/klein.hpp"
#include "nhsym/symmetry.hpp"

namespace nhsym {

enum class PropagatorMethod {
    Pade,        // scaling and squaring
    Resolution,  // sum_j |phi_j> exp(-i E_j t / hbar) <phihat_j|
    CrossCheck,  // both; throws NumericalRefusal if they differ by more than 1e-9
};

/// exp(-i H t / hbar). Throws RangeError (with a suggested number of time
/// slices) when the result overflows.
Matrix propagator(const Operator& h, double t, PropagatorMethod method = PropagatorMethod::Pade);
/// exp(-i H^dagger t / hbar).
Matrix dual_propagator(const Operator& h, double t, PropagatorMethod method = PropagatorMethod::Pade);

/// max(||U Uhat^dagger - 1||_F, ||Uhat^dagger U - 1||_F).
double generalized_unitarity_residual(const Operator& h, double t);

/// Sampled solution of i hbar d/dt psi = H psi (and optionally H^dagger).
///
/// Stored states may be rescaled to stay finite: the true state is
/// exp(log_scale[k]) * states[k]. norms[k] is the true N(t) = <psi|psi>,
/// +inf once it exceeds the double range; log_norms[k] = ln N(t) always.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Vector> dual_states;  // empty unless requested
    std::vector<double> norms;
    std::vector<double> log_norms;
    std::vector<double> log_scale;
    std::vector<double> dual_log_scale;

    bool has_dual() const noexcept { return !dual_states.empty(); }
    bool rescaled() const;
    std::size_t size() const noexcept { return times.size(); }
};

/// Norm above which evolve() rescales the stored state.
inline constexpr double kRescaleThreshold = 1e150;

/// Exact exponential stepping between consecutive sample times. times must
/// be sorted and start at 0; psi0 must have unit norm to 1e-12.
Trajectory evolve(const Operator& h, const Vector& psi0, const std::vector<double>& times, bool with_dual);

/// <psi|A|psi> / <psi|psi>. Throws DomainError for the zero vector.
cplx expectation(const Matrix& a, const Vector& psi);
cplx expectation(const Operator& a, const Vector& psi);

/// Antilinear maps have no gauge-invariant expectation value; only the
/// modulus is meaningful. The phase is reported in the gauge where the
/// first nonzero component of the reference state is real and positive.
struct AntilinearExpectation {
    double modulus = 0.0;
    double phase = 0.0;
};
AntilinearExpectation antilinear_expectation(const AntilinearMap& a, const Vector& psi, const Vector& gauge_reference);

struct RateReport {
    double dt = 0.0;
    cplx norm_rate_fd;
    cplx norm_rate_analytic;
    double norm_residual = 0.0;
    cplx expectation_rate_fd;
    cplx expectation_rate_analytic;
    double expectation_residual = 0.0;
    /// Single-term form -(1/i hbar) <H - H^dagger><A> / N^2, valid when
    /// A H = H^dagger A; set only in that case.
    std::optional<cplx> pseudo_rate;
    std::optional<double> pseudo_residual;
    double pseudo_relation_residual = 0.0;
};

/// Richardson-extrapolated central differences of N(t) and <A>(t) at the
/// state psi, against the analytic rate formulas. dt <= 0 selects
/// 1e-3 hbar / ||H||_F. Residuals are absolute.
RateReport rate_audit(const Operator& h, const Matrix& a, const Vector& psi, double dt = 0.0,
                      double relation_tol = 1e-10);

using Observable = std::variant<Matrix, AntilinearMap>;

struct AuditPoint {
    double t = 0.0;
    double norm = 0.0;
    cplx normalized_expectation;  // <A>(t); for antilinear A, modulus only (real part)
    cplx usual_pairing;           // <psi|A|psi>
    std::optional<cplx> unusual_pairing;  // <psihat|A|psi>
    std::optional<double> bound_margin;   // N(t) - |<A>(0)| / max|a_i|
};

struct AuditReport {
    Relation relation = Relation::Commute;
    bool antilinear = false;
    double relation_residual = 0.0;
    /// Max |q(t) - q(0)| of the quantity the relation conserves:
    /// Commute -> <psihat|A|psi>, Pseudo -> <psi|A|psi>. For antilinear A
    /// this is the drift of the modulus and carries no pass/fail claim.
    double drift = 0.0;
    bool asserted = true;
    /// Pseudo only: max |<A>(t) N(t) - <A>(0)|.
    std::optional<double> scaling_residual;
    /// Pseudo only, A with real spectrum: min over t of the bound margin.
    std::optional<double> min_bound_margin;
    std::optional<double> spectral_bound;  // max |a_i|
    std::vector<AuditPoint> points;
};

/// Throws PreconditionError if the relation residual exceeds tol, or if
/// Commute is requested without dual states. Throws RangeError when the
/// trajectory was rescaled (pairings are then out of double range).
AuditReport conservation_audit(const Operator& h, const Observable& a, Relation relation, const Trajectory& traj,
                               double tol = 1e-10);

}  // namespace nhsym
