#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nhsym/core.hpp"
#include "nhsym/dynamics.hpp"

namespace nhsym {

/// H(t) evaluated on demand. The evaluator must return a dim x dim matrix
/// for every t in the integration window.
struct HamiltonianSchedule {
    std::function<Matrix(double)> evaluator;
    Index dim = 0;
    double hbar = 1.0;

    Matrix at(double t) const;
    /// Constant schedule built from a time-independent operator.
    static HamiltonianSchedule constant(const Operator& h);
};

enum class InvariantVariant {
    Plain,   // dI/dt = (1/i hbar) [H, I]
    Primed,  // dI'/dt = (1/i hbar) (H^dagger I' - I' H)
};

const char* to_string(InvariantVariant v);

struct InvariantTrack {
    std::vector<double> times;
    std::vector<Matrix> operators;
    InvariantVariant variant = InvariantVariant::Plain;
    /// Maximum RK4 step; 0 when the track was sampled rather than integrated.
    double step = 0.0;
};

/// Classical RK4 with fixed step. Between consecutive sample times the
/// interval is split into ceil(dt/step) equal substeps. step <= 0 selects
/// 1e-3 of the window.
Trajectory evolve_td(const HamiltonianSchedule& schedule, const Vector& psi0, const std::vector<double>& times,
                     bool use_dagger, double step = 0.0);

InvariantTrack integrate_invariant(const HamiltonianSchedule& schedule, const Matrix& i0,
                                   const std::vector<double>& times, InvariantVariant variant, double step = 0.0);

/// Samples a prescribed operator family A(t) as a track (no integration).
InvariantTrack sample_family(const std::function<Matrix(double)>& family, const std::vector<double>& times,
                             InvariantVariant variant, double step);

struct InvariantAuditReport {
    InvariantVariant variant = InvariantVariant::Plain;
    double step = 0.0;
    bool hermitian_schedule = false;
    /// Plain: max |<psihat|I|psi>(t) - (0)|.
    std::optional<double> dual_drift;
    /// Plain: max |<psi|I|psi>(t) - (0)|; Primed: same with I'.
    double ordinary_drift = 0.0;
    /// The ordinary pairing is an invariant only for Plain with Hermitian
    /// H(t), or for Primed. Otherwise it is reported but not applicable.
    bool ordinary_applicable = false;

    /// Drift of the pairing the variant actually conserves.
    double conserved_drift() const;
};

/// Evolves psi (and psihat under H^dagger for Plain) with the track's step.
InvariantAuditReport invariant_audit(const HamiltonianSchedule& schedule, const InvariantTrack& track,
                                     const Vector& psi0);

/// max_t ||dA/dt - L(A)||_F / max(||A||_F, 1) with L the variant's
/// right-hand side and dA/dt by central differences of width fd_step.
double invariance_condition_residual(const HamiltonianSchedule& schedule,
                                     const std::function<Matrix(double)>& family, const std::vector<double>& times,
                                     InvariantVariant variant, double fd_step = 1e-4);

struct StepHalvingReport {
    double step = 0.0;
    double drift = 0.0;
    double drift_half = 0.0;
    double ratio = 0.0;
};

/// Conserved-pairing drift at step h and h/2 (full integrate + audit each time).
StepHalvingReport step_halving(const HamiltonianSchedule& schedule, const Matrix& i0, const Vector& psi0,
                               const std::vector<double>& times, InvariantVariant variant, double step);

}  // namespace nhsym
