#pragma once

#include <json.hpp>

#include "nhsym/dynamics.hpp"
#include "nhsym/hamiltonian.hpp"
#include "nhsym/invariants.hpp"
#include "nhsym/klein.hpp"
#include "nhsym/symmetry.hpp"

namespace nhsym {

// nlohmann::json keeps object keys sorted, so dumps are byte-stable.
using Json = nlohmann::json;

Json complex_json(cplx z);

Json to_json(const GroupReport& r);
Json to_json(const SymmetryReport& r);
Json to_json(const MappingReport& r);
/// Summary only (eigenvalues and residuals), not the vectors.
Json to_json(const BiorthogonalSystem& sys, const Matrix& h);
Json to_json(const RateReport& r);
Json to_json(const AuditReport& r);
Json to_json(const InvariantAuditReport& r);
Json to_json(const StepHalvingReport& r);

/// %.17g
std::string format_double(double x);

}  // namespace nhsym
