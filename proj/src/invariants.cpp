#include "nhsym/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nhsym {

Matrix HamiltonianSchedule::at(double t) const {
    if (!evaluator) throw InvalidArgument("schedule has no evaluator");
    Matrix h = evaluator(t);
    if (h.rows() != dim || h.cols() != dim) {
        throw InvalidArgument("schedule returned a " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                              " matrix at t = " + std::to_string(t) + ", expected " + std::to_string(dim));
    }
    return h;
}

HamiltonianSchedule HamiltonianSchedule::constant(const Operator& h) {
    return {[m = h.matrix()](double) { return m; }, h.dim(), h.hbar()};
}

const char* to_string(InvariantVariant v) { return v == InvariantVariant::Plain ? "plain" : "primed"; }

namespace {

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw InvalidArgument("times must not be empty");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] >= times[k - 1])) throw InvalidArgument("times must be sorted");
    }
}

double default_step(const std::vector<double>& times, double step) {
    if (step > 0.0) return step;
    const double window = times.back() - times.front();
    return window > 0.0 ? 1e-3 * window : 1.0;
}

// One RK4 integration over the sample grid for y' = f(t, y); y may be a
// vector or a matrix. record(k, y) is called at every sample time.
template <typename State, typename Rhs, typename Record>
void rk4_over_samples(const std::vector<double>& times, double step, State y, Rhs&& f, Record&& record) {
    record(0, y);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double t0 = times[k - 1];
        const double span = times[k] - t0;
        const auto substeps = std::max<long>(1, static_cast<long>(std::ceil(span / step - 1e-9)));
        const double h = span / static_cast<double>(substeps);
        for (long s = 0; s < substeps; ++s) {
            const double t = t0 + static_cast<double>(s) * h;
            const State k1 = f(t, y);
            const State k2 = f(t + 0.5 * h, State(y + 0.5 * h * k1));
            const State k3 = f(t + 0.5 * h, State(y + 0.5 * h * k2));
            const State k4 = f(t + h, State(y + h * k3));
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        record(k, y);
    }
}

bool schedule_hermitian(const HamiltonianSchedule& schedule, const std::vector<double>& times) {
    for (double t : times) {
        const Matrix h = schedule.at(t);
        if ((h - h.adjoint()).norm() > 1e-12 * std::max(1.0, h.norm())) return false;
    }
    return true;
}

}  // namespace

Trajectory evolve_td(const HamiltonianSchedule& schedule, const Vector& psi0, const std::vector<double>& times,
                     bool use_dagger, double step) {
    check_times(times);
    if (psi0.size() != schedule.dim) throw InvalidArgument("evolve_td: state dimension does not match schedule");
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-12) {
        throw InvalidArgument("evolve_td: initial state must be normalized (|N - 1| <= 1e-12)");
    }
    step = default_step(times, step);
    const cplx inv_ihbar = 1.0 / cplx(0.0, schedule.hbar);

    Trajectory traj;
    traj.times = times;
    auto rhs = [&](double t, const Vector& y) -> Vector {
        const Matrix h = schedule.at(t);
        return use_dagger ? Vector(inv_ihbar * (h.adjoint() * y)) : Vector(inv_ihbar * (h * y));
    };
    rk4_over_samples(times, step, psi0, rhs, [&](std::size_t, const Vector& y) {
        traj.states.push_back(y);
        const double n2 = y.squaredNorm();
        traj.norms.push_back(n2);
        traj.log_norms.push_back(std::log(n2));
        traj.log_scale.push_back(0.0);
    });
    return traj;
}

InvariantTrack integrate_invariant(const HamiltonianSchedule& schedule, const Matrix& i0,
                                   const std::vector<double>& times, InvariantVariant variant, double step) {
    check_times(times);
    if (i0.rows() != schedule.dim || i0.cols() != schedule.dim) {
        throw InvalidArgument("integrate_invariant: I0 dimension does not match schedule");
    }
    InvariantTrack track;
    track.times = times;
    track.variant = variant;
    track.step = default_step(times, step);
    const cplx inv_ihbar = 1.0 / cplx(0.0, schedule.hbar);
    auto rhs = [&](double t, const Matrix& y) -> Matrix {
        const Matrix h = schedule.at(t);
        if (variant == InvariantVariant::Plain) return inv_ihbar * (h * y - y * h);
        return inv_ihbar * (h.adjoint() * y - y * h);
    };
    rk4_over_samples(times, track.step, i0, rhs,
                     [&](std::size_t, const Matrix& y) { track.operators.push_back(y); });
    return track;
}

InvariantTrack sample_family(const std::function<Matrix(double)>& family, const std::vector<double>& times,
                             InvariantVariant variant, double step) {
    check_times(times);
    InvariantTrack track;
    track.times = times;
    track.variant = variant;
    track.step = step;
    for (double t : times) track.operators.push_back(family(t));
    return track;
}

double InvariantAuditReport::conserved_drift() const {
    if (variant == InvariantVariant::Plain && dual_drift) return *dual_drift;
    return ordinary_drift;
}

InvariantAuditReport invariant_audit(const HamiltonianSchedule& schedule, const InvariantTrack& track,
                                     const Vector& psi0) {
    if (track.operators.size() != track.times.size() || track.times.empty()) {
        throw InvalidArgument("invariant_audit: malformed track");
    }
    InvariantAuditReport report;
    report.variant = track.variant;
    report.step = default_step(track.times, track.step);
    report.hermitian_schedule = schedule_hermitian(schedule, track.times);

    const Trajectory forward = evolve_td(schedule, psi0, track.times, false, report.step);
    auto drift_of = [&](auto pairing) {
        const cplx q0 = pairing(0);
        double worst = 0.0;
        for (std::size_t k = 0; k < track.times.size(); ++k) worst = std::max(worst, std::abs(pairing(k) - q0));
        return worst;
    };
    report.ordinary_drift = drift_of([&](std::size_t k) {
        const Vector& psi = forward.states[k];
        return psi.dot(track.operators[k] * psi);
    });

    if (track.variant == InvariantVariant::Plain) {
        report.ordinary_applicable = report.hermitian_schedule;
        const Trajectory dual =
            report.hermitian_schedule ? forward : evolve_td(schedule, psi0, track.times, true, report.step);
        report.dual_drift = drift_of([&](std::size_t k) {
            return dual.states[k].dot(track.operators[k] * forward.states[k]);
        });
    } else {
        report.ordinary_applicable = true;
    }
    return report;
}

double invariance_condition_residual(const HamiltonianSchedule& schedule,
                                     const std::function<Matrix(double)>& family, const std::vector<double>& times,
                                     InvariantVariant variant, double fd_step) {
    const cplx inv_ihbar = 1.0 / cplx(0.0, schedule.hbar);
    double worst = 0.0;
    for (double t : times) {
        const Matrix a = family(t);
        const Matrix deriv = (family(t + fd_step) - family(t - fd_step)) / (2.0 * fd_step);
        const Matrix h = schedule.at(t);
        const Matrix rhs = variant == InvariantVariant::Plain ? Matrix(inv_ihbar * (h * a - a * h))
                                                              : Matrix(inv_ihbar * (h.adjoint() * a - a * h));
        worst = std::max(worst, (deriv - rhs).norm() / std::max(1.0, a.norm()));
    }
    return worst;
}

StepHalvingReport step_halving(const HamiltonianSchedule& schedule, const Matrix& i0, const Vector& psi0,
                               const std::vector<double>& times, InvariantVariant variant, double step) {
    StepHalvingReport report;
    report.step = default_step(times, step);
    const auto coarse = integrate_invariant(schedule, i0, times, variant, report.step);
    const auto fine = integrate_invariant(schedule, i0, times, variant, 0.5 * report.step);
    report.drift = invariant_audit(schedule, coarse, psi0).conserved_drift();
    report.drift_half = invariant_audit(schedule, fine, psi0).conserved_drift();
    report.ratio = report.drift_half > 0.0 ? report.drift / report.drift_half : 0.0;
    return report;
}

}  // namespace nhsym
