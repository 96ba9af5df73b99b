#include "nhsym/serialize.hpp"

#include <cstdio>
#include <string>

namespace nhsym {

namespace {

// JSON has no infinity/NaN; report them as strings rather than null.
Json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

Json complex_json(cplx z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json to_json(const GroupReport& r) {
    Json table = Json::array();
    for (const auto& row : r.table) {
        Json out = Json::array();
        for (const auto& cell : row) out.push_back(cell ? Json(std::string(to_string(*cell))) : Json(nullptr));
        table.push_back(out);
    }
    Json order = Json::array();
    for (auto c : kAllCodes) order.push_back(std::string(to_string(c)));
    return Json{
        {"dim", r.dim},
        {"element_order", order},
        {"composition_table", table},
        {"closed", r.closed},
        {"commutative", r.commutative},
        {"self_inverse", r.self_inverse},
        {"identity_is_I", r.identity_is_I},
        {"generated_by_dagger_parity_time", r.generated_by_dagger_parity_time},
        {"elementary_abelian_order_8", r.elementary_abelian_order_8},
        {"max_match_residual", number(r.max_match_residual)},
    };
}

Json to_json(const SymmetryReport& r) {
    Json codes = Json::object();
    Json held = Json::array();
    for (std::size_t i = 0; i < 8; ++i) {
        const std::string name(to_string(kAllCodes[i]));
        codes[name] = Json{{"residual", number(r.codes[i].residual)}, {"holds", r.codes[i].holds}};
        if (r.codes[i].holds) held.push_back(name);
    }
    return Json{{"codes", codes},
                {"held", held},
                {"tolerance", r.tolerance},
                {"basis", to_string(r.basis)},
                {"subgroup_closed", r.subgroup_closed}};
}

Json to_json(const MappingReport& r) {
    return Json{{"relation", to_string(r.relation)},
                {"antilinear", r.antilinear},
                {"relation_residual", number(r.relation_residual)},
                {"max_residual", number(r.max_residual)},
                {"conjugation_distance", number(r.conjugation_distance)},
                {"implies_conjugation_closure", r.implies_conjugation_closure}};
}

Json to_json(const BiorthogonalSystem& sys, const Matrix& h) {
    Json values = Json::array();
    for (Index j = 0; j < sys.eigenvalues.size(); ++j) values.push_back(complex_json(sys.eigenvalues[j]));
    return Json{{"eigenvalues", values},
                {"eigvec_condition", number(sys.eigvec_condition)},
                {"left_vector_route", to_string(sys.route)},
                {"route_discrepancy", number(sys.route_discrepancy)},
                {"pairing_ambiguous", sys.pairing_ambiguous},
                {"adjoint_spectrum_distance", number(sys.adjoint_spectrum_distance)},
                {"biorthonormality_residual", number(sys.biorthonormality_residual())},
                {"resolution_residual", number(resolution_residual(sys, h))},
                {"right_eigen_residual", number(sys.eigen_residual(h))},
                {"left_eigen_residual", number(sys.left_eigen_residual(h))}};
}

Json to_json(const RateReport& r) {
    Json j{{"dt", r.dt},
           {"norm_rate_fd", complex_json(r.norm_rate_fd)},
           {"norm_rate_analytic", complex_json(r.norm_rate_analytic)},
           {"norm_residual", number(r.norm_residual)},
           {"expectation_rate_fd", complex_json(r.expectation_rate_fd)},
           {"expectation_rate_analytic", complex_json(r.expectation_rate_analytic)},
           {"expectation_residual", number(r.expectation_residual)},
           {"pseudo_relation_residual", number(r.pseudo_relation_residual)}};
    if (r.pseudo_rate) {
        j["pseudo_rate"] = complex_json(*r.pseudo_rate);
        j["pseudo_residual"] = number(*r.pseudo_residual);
    }
    return j;
}

Json to_json(const AuditReport& r) {
    Json j{{"relation", to_string(r.relation)},
           {"antilinear", r.antilinear},
           {"asserted", r.asserted},
           {"relation_residual", number(r.relation_residual)},
           {"drift", number(r.drift)},
           {"samples", r.points.size()}};
    if (r.scaling_residual) j["scaling_residual"] = number(*r.scaling_residual);
    if (r.min_bound_margin) j["min_bound_margin"] = number(*r.min_bound_margin);
    if (r.spectral_bound) j["spectral_bound"] = number(*r.spectral_bound);
    return j;
}

Json to_json(const InvariantAuditReport& r) {
    Json j{{"variant", to_string(r.variant)},
           {"step", r.step},
           {"hermitian_schedule", r.hermitian_schedule},
           {"ordinary_drift", number(r.ordinary_drift)},
           {"ordinary_applicable", r.ordinary_applicable},
           {"conserved_drift", number(r.conserved_drift())}};
    if (r.dual_drift) j["dual_drift"] = number(*r.dual_drift);
    return j;
}

Json to_json(const StepHalvingReport& r) {
    return Json{{"step", r.step},
                {"drift", number(r.drift)},
                {"drift_half_step", number(r.drift_half)},
                {"convergence_ratio", number(r.ratio)}};
}

}  // namespace nhsym
