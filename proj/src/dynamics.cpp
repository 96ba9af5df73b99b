#include "nhsym/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nhsym/linalg.hpp"

namespace nhsym {

namespace {

constexpr double kOverflowNorm = 1e300;
constexpr double kCrossCheckTol = 1e-9;
constexpr double kResolutionConditionLimit = 1e6;

Matrix exponential_of_generator(const Matrix& h, double t, double hbar, PropagatorMethod method) {
    if (!std::isfinite(t)) throw InvalidArgument("propagator: time must be finite");
    const Index n = h.rows();
    if (t == 0.0) return Matrix::Identity(n, n);

    auto refuse_overflow = [&]() {
        const double rate = max_norm_growth_rate(t >= 0.0 ? h : Matrix(-h), hbar);
        // ||U(tau)||^2 <= exp(rate tau); keep each slice below exp(300) in norm.
        const long pieces = std::max(2L, static_cast<long>(std::ceil(std::max(rate, 0.0) * std::abs(t) / 600.0)));
        throw RangeError("exp(-iHt/hbar) overflows at t = " + std::to_string(t) + "; split into at least " +
                             std::to_string(pieces) + " time slices and renormalize between them",
                         pieces);
    };

    Matrix pade;
    Matrix resolution;
    if (method != PropagatorMethod::Resolution) {
        pade = expm(h * cplx(0.0, -t / hbar));
        if (!pade.allFinite() || pade.norm() > kOverflowNorm) refuse_overflow();
        if (method == PropagatorMethod::Pade) return pade;
    }
    {
        EigOptions opts;
        opts.tol = 1.0 / kResolutionConditionLimit;
        const BiorthogonalSystem sys = biorthogonal_eig(h, opts);
        const Vector phases = (sys.eigenvalues * cplx(0.0, -t / hbar)).array().exp().matrix();
        resolution = sys.right * phases.asDiagonal() * sys.left.adjoint();
        if (!resolution.allFinite() || resolution.norm() > kOverflowNorm) refuse_overflow();
    }
    if (method == PropagatorMethod::Resolution) return resolution;
    const double disagreement = relative_frobenius(resolution, pade);
    if (disagreement > kCrossCheckTol) {
        throw NumericalRefusal("Pade and spectral-resolution propagators disagree: relative difference " +
                               std::to_string(disagreement));
    }
    return pade;
}

double relative_to(double diff, double scale) { return scale > 0.0 ? diff / scale : diff; }

}  // namespace

Matrix propagator(const Operator& h, double t, PropagatorMethod method) {
    return exponential_of_generator(h.matrix(), t, h.hbar(), method);
}

Matrix dual_propagator(const Operator& h, double t, PropagatorMethod method) {
    return exponential_of_generator(h.matrix().adjoint(), t, h.hbar(), method);
}

double generalized_unitarity_residual(const Operator& h, double t) {
    const Matrix u = propagator(h, t);
    const Matrix uhat = dual_propagator(h, t);
    const Matrix id = Matrix::Identity(h.dim(), h.dim());
    return std::max((u * uhat.adjoint() - id).norm(), (uhat.adjoint() * u - id).norm());
}

bool Trajectory::rescaled() const {
    const auto nonzero = [](double s) { return s != 0.0; };
    return std::any_of(log_scale.begin(), log_scale.end(), nonzero) ||
           std::any_of(dual_log_scale.begin(), dual_log_scale.end(), nonzero);
}

Trajectory evolve(const Operator& h, const Vector& psi0, const std::vector<double>& times, bool with_dual) {
    if (psi0.size() != h.dim()) throw InvalidArgument("evolve: state dimension does not match H");
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-12) {
        throw InvalidArgument("evolve: initial state must be normalized (|N - 1| <= 1e-12)");
    }
    if (times.empty() || times.front() != 0.0) throw InvalidArgument("evolve: times must start at 0");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] >= times[k - 1])) throw InvalidArgument("evolve: times must be sorted");
    }

    Trajectory traj;
    traj.times = times;
    const std::size_t m = times.size();
    traj.states.reserve(m);
    traj.norms.reserve(m);
    traj.log_norms.reserve(m);
    traj.log_scale.reserve(m);

    struct Stepper {
        bool dual;
        double last_dt = std::numeric_limits<double>::quiet_NaN();
        Matrix step;
    };

    auto advance = [&h](Stepper& s, const Vector& from, double dt, double t_now) -> Vector {
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_now));
        if (!(std::abs(dt - s.last_dt) <= slack)) {
            s.step = s.dual ? dual_propagator(h, dt) : propagator(h, dt);
            s.last_dt = dt;
        }
        return s.step * from;
    };

    auto renormalize = [](Vector& v, double& log_scale) {
        const double n2 = v.squaredNorm();
        if (n2 > kRescaleThreshold || (n2 > 0.0 && n2 < 1.0 / kRescaleThreshold)) {
            const double s = std::sqrt(n2);
            v /= s;
            log_scale += std::log(s);
        }
    };

    Stepper forward{false, std::numeric_limits<double>::quiet_NaN(), Matrix()};
    Stepper backward{true, std::numeric_limits<double>::quiet_NaN(), Matrix()};
    Vector psi = psi0;
    Vector psihat = psi0;
    double scale = 0.0;
    double dual_scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (k > 0) {
            const double dt = times[k] - times[k - 1];
            psi = advance(forward, psi, dt, times[k]);
            renormalize(psi, scale);
            if (with_dual) {
                psihat = advance(backward, psihat, dt, times[k]);
                renormalize(psihat, dual_scale);
            }
        }
        const double log_n = 2.0 * scale + std::log(psi.squaredNorm());
        traj.states.push_back(psi);
        traj.log_scale.push_back(scale);
        traj.log_norms.push_back(log_n);
        traj.norms.push_back(scale == 0.0 ? psi.squaredNorm() : std::exp(log_n));
        if (with_dual) {
            traj.dual_states.push_back(psihat);
            traj.dual_log_scale.push_back(dual_scale);
        }
    }
    return traj;
}

cplx expectation(const Matrix& a, const Vector& psi) {
    if (a.rows() != psi.size()) throw InvalidArgument("expectation: dimension mismatch");
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw DomainError("expectation value in the zero vector is undefined");
    return psi.dot(a * psi) / n2;
}

cplx expectation(const Operator& a, const Vector& psi) { return expectation(a.matrix(), psi); }

AntilinearExpectation antilinear_expectation(const AntilinearMap& a, const Vector& psi, const Vector& gauge_reference) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw DomainError("expectation value in the zero vector is undefined");
    if (gauge_reference.size() != psi.size()) throw InvalidArgument("antilinear_expectation: dimension mismatch");
    // Gauge: first component above 1e-12 of the largest is made real-positive.
    const double cutoff = 1e-12 * gauge_reference.cwiseAbs().maxCoeff();
    cplx gauge = 1.0;
    for (Index j = 0; j < gauge_reference.size(); ++j) {
        if (std::abs(gauge_reference[j]) > cutoff) {
            gauge = std::conj(gauge_reference[j]) / std::abs(gauge_reference[j]);
            break;
        }
    }
    const Vector fixed = gauge * psi;
    const cplx value = fixed.dot(a.apply(fixed)) / n2;
    return {std::abs(value), std::arg(value)};
}

RateReport rate_audit(const Operator& h, const Matrix& a, const Vector& psi, double dt, double relation_tol) {
    const Matrix& hm = h.matrix();
    if (a.rows() != hm.rows() || psi.size() != hm.rows()) throw InvalidArgument("rate_audit: dimension mismatch");
    const double hbar = h.hbar();
    if (dt <= 0.0) dt = 1e-3 * hbar / hm.norm();

    RateReport report;
    report.dt = dt;

    auto norm_at = [&](const Vector& v) { return v.squaredNorm(); };
    auto expect_at = [&](const Vector& v) { return expectation(a, v); };
    auto state_at = [&](double s) -> Vector { return propagator(h, s) * psi; };

    const Vector p1 = state_at(dt), m1 = state_at(-dt);
    const Vector p2 = state_at(0.5 * dt), m2 = state_at(-0.5 * dt);
    auto richardson = [&](auto f) -> cplx {
        const cplx coarse = (cplx(f(p1)) - cplx(f(m1))) / (2.0 * dt);
        const cplx fine = (cplx(f(p2)) - cplx(f(m2))) / dt;
        return (4.0 * fine - coarse) / 3.0;
    };
    report.norm_rate_fd = richardson(norm_at);
    report.expectation_rate_fd = richardson(expect_at);

    const cplx inv_ihbar = 1.0 / cplx(0.0, hbar);
    const Matrix anti = hm - hm.adjoint();
    const double n = psi.squaredNorm();
    const cplx gain = psi.dot(anti * psi);  // <psi|H - H^dagger|psi>
    const cplx a_unnorm = psi.dot(a * psi);
    const cplx mixed = psi.dot((a * hm - hm.adjoint() * a) * psi);
    report.norm_rate_analytic = inv_ihbar * gain;
    report.expectation_rate_analytic = inv_ihbar * (n * mixed - gain * a_unnorm) / (n * n);
    report.norm_residual = std::abs(report.norm_rate_fd - report.norm_rate_analytic);
    report.expectation_residual = std::abs(report.expectation_rate_fd - report.expectation_rate_analytic);

    const double scale = (a * hm).norm();
    report.pseudo_relation_residual = relative_to((a * hm - hm.adjoint() * a).norm(), scale);
    if (report.pseudo_relation_residual <= relation_tol) {
        report.pseudo_rate = -inv_ihbar * gain * a_unnorm / (n * n);
        report.pseudo_residual = std::abs(*report.pseudo_rate - report.expectation_rate_fd);
    }
    return report;
}

AuditReport conservation_audit(const Operator& h, const Observable& a, Relation relation, const Trajectory& traj,
                               double tol) {
    const Matrix& hm = h.matrix();
    AuditReport report;
    report.relation = relation;
    report.antilinear = std::holds_alternative<AntilinearMap>(a);
    report.asserted = !report.antilinear;

    if (report.antilinear) {
        const auto& map = std::get<AntilinearMap>(a);
        if (map.dim() != h.dim()) throw InvalidArgument("conservation_audit: dimension mismatch");
        report.relation_residual =
            relation == Relation::Commute ? map.commutation_residual(hm) : map.pseudohermiticity_residual(hm);
    } else {
        const auto& am = std::get<Matrix>(a);
        if (am.rows() != h.dim()) throw InvalidArgument("conservation_audit: dimension mismatch");
        const Matrix rhs = relation == Relation::Commute ? Matrix(hm * am) : Matrix(hm.adjoint() * am);
        report.relation_residual = relative_to((am * hm - rhs).norm(), (am * hm).norm());
    }
    if (!(report.relation_residual <= tol)) {
        throw PreconditionError(std::string("relation '") + to_string(relation) + "' does not hold: residual " +
                                std::to_string(report.relation_residual) + " > " + std::to_string(tol));
    }
    if (relation == Relation::Commute && !traj.has_dual()) {
        throw PreconditionError("commutation audit needs dual states (evolve with with_dual = true)");
    }
    if (traj.rescaled()) {
        throw RangeError("trajectory was rescaled to stay finite; pairings are outside double range", 1);
    }
    if (traj.size() == 0) return report;

    const Vector& psi0 = traj.states.front();
    auto apply = [&](const Vector& v) -> Vector {
        if (report.antilinear) return std::get<AntilinearMap>(a).apply(v);
        return std::get<Matrix>(a) * v;
    };
    // Antilinear pairings are taken in the psi0 gauge (first significant component real-positive).
    cplx gauge = 1.0;
    if (report.antilinear) {
        const double cutoff = 1e-12 * psi0.cwiseAbs().maxCoeff();
        for (Index j = 0; j < psi0.size(); ++j) {
            if (std::abs(psi0[j]) > cutoff) {
                gauge = std::conj(psi0[j]) / std::abs(psi0[j]);
                break;
            }
        }
    }

    std::optional<double> a_max;
    if (!report.antilinear && relation == Relation::Pseudo) {
        const auto& am = std::get<Matrix>(a);
        if ((am - am.adjoint()).norm() <= 1e-12 * std::max(1.0, am.norm())) {
            const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (am + am.adjoint()), Eigen::EigenvaluesOnly);
            a_max = es.eigenvalues().cwiseAbs().maxCoeff();
        }
    }

    for (std::size_t k = 0; k < traj.size(); ++k) {
        AuditPoint p;
        p.t = traj.times[k];
        const Vector psi = gauge * traj.states[k];
        p.norm = traj.norms[k];
        p.usual_pairing = psi.dot(apply(psi));
        p.normalized_expectation = p.usual_pairing / psi.squaredNorm();
        if (report.antilinear) p.normalized_expectation = std::abs(p.normalized_expectation);
        if (traj.has_dual()) {
            const Vector psihat = gauge * traj.dual_states[k];
            p.unusual_pairing = psihat.dot(apply(psi));
        }
        report.points.push_back(p);
    }

    const AuditPoint& first = report.points.front();
    auto conserved = [&](const AuditPoint& p) -> cplx {
        const cplx q = relation == Relation::Commute ? *p.unusual_pairing : p.usual_pairing;
        return report.antilinear ? cplx(std::abs(q)) : q;
    };
    const cplx q0 = conserved(first);
    for (const auto& p : report.points) report.drift = std::max(report.drift, std::abs(conserved(p) - q0));

    if (relation == Relation::Pseudo && !report.antilinear) {
        double scaling = 0.0;
        for (const auto& p : report.points) {
            scaling = std::max(scaling, std::abs(p.normalized_expectation * p.norm - first.normalized_expectation));
        }
        report.scaling_residual = scaling;
        if (a_max && *a_max > 0.0) {
            report.spectral_bound = *a_max;
            const double floor = std::abs(first.normalized_expectation) / *a_max;
            double worst = std::numeric_limits<double>::infinity();
            for (auto& p : report.points) {
                p.bound_margin = p.norm - floor;
                worst = std::min(worst, *p.bound_margin);
            }
            report.min_bound_margin = worst;
        }
    }
    return report;
}

}  // namespace nhsym
