#include "nhsym/hamiltonian.hpp"

#include <array>
#include <charconv>
#include <limits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "nhsym/linalg.hpp"

namespace nhsym {

namespace {

constexpr std::array<std::pair<PotentialKind, std::string_view>, 6> kKindNames{{
    {PotentialKind::RealGaussianWell, "RealGaussianWell"},
    {PotentialKind::ImaginaryLinear, "ImaginaryLinear"},
    {PotentialKind::ComplexAbsorbing, "ComplexAbsorbing"},
    {PotentialKind::NonlocalSeparable, "NonlocalSeparable"},
    {PotentialKind::MatrixFile, "MatrixFile"},
    {PotentialKind::TwoLevelPT, "TwoLevelPT"},
}};

double gaussian(double x, double center, double width) {
    const double s = (x - center) / width;
    return std::exp(-0.5 * s * s);
}

}  // namespace

std::string_view to_string(PotentialKind k) {
    for (const auto& [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "?";
}

std::optional<PotentialKind> parse_potential_kind(std::string_view s) {
    for (const auto& [kind, name] : kKindNames) {
        if (name == s) return kind;
    }
    return std::nullopt;
}

const std::map<std::string, double>& potential_defaults(PotentialKind k) {
    static const std::map<std::string, double> well{{"depth", 1.0}, {"width", 1.0}, {"center", 0.0}};
    static const std::map<std::string, double> linear{{"slope", 1.0}};
    static const std::map<std::string, double> absorbing{{"strength", 1.0}, {"width", 1.0}};
    static const std::map<std::string, double> nonlocal{
        {"coupling", 1.0}, {"coupling_imag", 0.0}, {"width", 1.0}, {"u_center", 0.0}, {"w_center", 0.0}};
    static const std::map<std::string, double> none{};
    static const std::map<std::string, double> two_level{{"gamma", 0.0}, {"kappa", 1.0}};
    switch (k) {
        case PotentialKind::RealGaussianWell: return well;
        case PotentialKind::ImaginaryLinear: return linear;
        case PotentialKind::ComplexAbsorbing: return absorbing;
        case PotentialKind::NonlocalSeparable: return nonlocal;
        case PotentialKind::MatrixFile: return none;
        case PotentialKind::TwoLevelPT: return two_level;
    }
    return none;
}

double PotentialSpec::get(const std::string& name) const {
    if (auto it = parameters.find(name); it != parameters.end()) return it->second;
    const auto& defaults = potential_defaults(kind);
    if (auto it = defaults.find(name); it != defaults.end()) return it->second;
    throw InvalidArgument("potential " + std::string(to_string(kind)) + " has no parameter '" + name + "'");
}

void validate(const PotentialSpec& spec) {
    const auto& defaults = potential_defaults(spec.kind);
    for (const auto& [name, value] : spec.parameters) {
        if (!defaults.contains(name)) {
            throw InvalidArgument("unknown parameter '" + name + "' for potential " +
                                  std::string(to_string(spec.kind)));
        }
        if (!std::isfinite(value)) throw InvalidArgument("parameter '" + name + "' is not finite");
    }
    if (defaults.contains("width") && !(spec.get("width") > 0.0)) {
        throw InvalidArgument("width must be positive");
    }
    if (spec.kind == PotentialKind::MatrixFile && spec.path.empty()) {
        throw InvalidArgument("MatrixFile potential needs a path");
    }
}

Operator build_potential(const PotentialSpec& spec, const Grid& grid) {
    validate(spec);
    const Index n = grid.n();
    Matrix v = Matrix::Zero(n, n);
    switch (spec.kind) {
        case PotentialKind::RealGaussianWell: {
            const double depth = spec.get("depth");
            const double width = spec.get("width");
            const double center = spec.get("center");
            for (Index j = 0; j < n; ++j) {
                const double s = (grid.x(j) - center) / width;
                v(j, j) = -depth * std::exp(-s * s);
            }
            break;
        }
        case PotentialKind::ImaginaryLinear: {
            const double slope = spec.get("slope");
            for (Index j = 0; j < n; ++j) v(j, j) = cplx(0.0, slope * grid.x(j));
            break;
        }
        case PotentialKind::ComplexAbsorbing: {
            const double strength = spec.get("strength");
            const double width = spec.get("width");
            for (Index j = 0; j < n; ++j) {
                const double s = grid.x(j) / width;
                v(j, j) = cplx(0.0, -strength * std::exp(-s * s));
            }
            break;
        }
        case PotentialKind::NonlocalSeparable: {
            const cplx lambda(spec.get("coupling"), spec.get("coupling_imag"));
            const double width = spec.get("width");
            Vector u(n), w(n);
            for (Index j = 0; j < n; ++j) {
                u[j] = gaussian(grid.x(j), spec.get("u_center"), width);
                w[j] = gaussian(grid.x(j), spec.get("w_center"), width);
            }
            v = lambda * u * w.adjoint();
            break;
        }
        case PotentialKind::MatrixFile: {
            v = read_matrix_csv(spec.path);
            if (v.rows() != n) {
                throw InputError("matrix file " + spec.path.string() + " has dimension " +
                                 std::to_string(v.rows()) + ", grid has " + std::to_string(n));
            }
            break;
        }
        case PotentialKind::TwoLevelPT:
            throw InvalidArgument("TwoLevelPT is a model-space Hamiltonian, not a grid potential");
    }
    return Operator(std::move(v), grid);
}

Operator build_hamiltonian(const Grid& grid, const PotentialSpec& spec) {
    if (spec.kind == PotentialKind::TwoLevelPT) {
        validate(spec);
        const double gamma = spec.get("gamma");
        const double kappa = spec.get("kappa");
        Matrix h(2, 2);
        h << cplx(0.0, gamma), kappa, kappa, cplx(0.0, -gamma);
        return Operator::model(std::move(h), grid.hbar());
    }
    const Operator h0 = kinetic_operator(grid);
    const Operator v = build_potential(spec, grid);
    return h0.with_matrix(h0.matrix() + v.matrix());
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open matrix file " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t end = line.find(',', start);
            std::string_view field(line.data() + start, (end == std::string::npos ? line.size() : end) - start);
            while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
            while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
                throw InputError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                                 std::string(field) + "'");
            }
            row.push_back(value);
            if (end == std::string::npos) break;
            start = end + 1;
        }
        rows.push_back(std::move(row));
    }
    const auto n = static_cast<Index>(rows.size());
    if (n == 0) throw InputError("matrix file " + path.string() + " is empty");
    Matrix m(n, n);
    for (Index j = 0; j < n; ++j) {
        const auto& row = rows[static_cast<std::size_t>(j)];
        if (static_cast<Index>(row.size()) != 2 * n) {
            throw InputError(path.string() + ": row " + std::to_string(j + 1) + " has " +
                             std::to_string(row.size()) + " columns, expected " + std::to_string(2 * n));
        }
        for (Index k = 0; k < n; ++k) {
            m(j, k) = cplx(row[static_cast<std::size_t>(2 * k)], row[static_cast<std::size_t>(2 * k + 1)]);
        }
    }
    return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write matrix file " + path.string());
    char buf[64];
    for (Index j = 0; j < m.rows(); ++j) {
        for (Index k = 0; k < m.cols(); ++k) {
            if (k > 0) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(j, k).real(), m(j, k).imag());
            out << buf;
        }
        out << '\n';
    }
}

std::string_view to_string(LeftVectorRoute r) {
    return r == LeftVectorRoute::AdjointEigensolve ? "adjoint-eigensolve" : "inverse";
}

double BiorthogonalSystem::biorthonormality_residual() const {
    const Index n = right.cols();
    return (left.adjoint() * right - Matrix::Identity(n, n)).norm();
}

double BiorthogonalSystem::eigen_residual(const Matrix& h) const {
    const double scale = std::max(h.norm(), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (Index j = 0; j < right.cols(); ++j) {
        worst = std::max(worst, (h * right.col(j) - eigenvalues[j] * right.col(j)).norm() / scale);
    }
    return worst;
}

double BiorthogonalSystem::left_eigen_residual(const Matrix& h) const {
    const double scale = std::max(h.norm(), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (Index j = 0; j < left.cols(); ++j) {
        const double len = left.col(j).norm();
        const Vector r = h.adjoint() * left.col(j) - std::conj(eigenvalues[j]) * left.col(j);
        worst = std::max(worst, r.norm() / (scale * len));
    }
    return worst;
}

BiorthogonalSystem biorthogonal_eig(const Matrix& h, const EigOptions& options) {
    if (h.rows() != h.cols() || h.rows() == 0) throw InvalidArgument("biorthogonal_eig: H must be square");
    if (!h.allFinite()) throw InvalidArgument("biorthogonal_eig: non-finite entries");
    const Index n = h.rows();

    BiorthogonalSystem sys;
    const Eigen::ComplexEigenSolver<Matrix> right_solver(h, true);
    if (right_solver.info() != Eigen::Success) throw NumericalRefusal("eigensolver did not converge for H");
    sys.eigenvalues = right_solver.eigenvalues();
    sys.right = right_solver.eigenvectors();
    for (Index j = 0; j < n; ++j) sys.right.col(j).normalize();

    const Eigen::JacobiSVD<Matrix> svd(sys.right);
    const auto& sv = svd.singularValues();
    sys.eigvec_condition = sv[n - 1] > 0.0 ? sv[0] / sv[n - 1] : std::numeric_limits<double>::infinity();
    if (!(sys.eigvec_condition <= 1.0 / options.tol)) {
        throw NearExceptionalPointError("eigenvector matrix condition " + std::to_string(sys.eigvec_condition) +
                                            " exceeds " + std::to_string(1.0 / options.tol) +
                                            " (near an exceptional point; H is not safely diagonalizable)",
                                        sys.eigvec_condition);
    }

    const Eigen::ComplexEigenSolver<Matrix> left_solver(h.adjoint(), true);
    if (left_solver.info() != Eigen::Success) throw NumericalRefusal("eigensolver did not converge for H^dagger");
    const Vector& mu = left_solver.eigenvalues();
    const Matrix& w = left_solver.eigenvectors();
    sys.adjoint_spectrum_distance = multiset_distance(mu, sys.eigenvalues.conjugate());

    // Independent route: rows of R^-1 are the dual basis.
    const Matrix inverse_left = sys.right.partialPivLu().inverse().adjoint();

    // Pair eig(H^dagger) with conj(eig(H)); any cluster or non-unique match is ambiguous.
    const double cluster = options.cluster_tol * std::max(h.norm(), 1.0);
    std::vector<Index> partner(static_cast<std::size_t>(n), -1);
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    std::ostringstream diagnostic;
    for (Index j = 0; j < n && !sys.pairing_ambiguous; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (i != j && std::abs(sys.eigenvalues[i] - sys.eigenvalues[j]) < cluster) {
                sys.pairing_ambiguous = true;
                diagnostic << "eigenvalues " << j << " and " << i << " coincide within " << cluster << " (E = "
                           << sys.eigenvalues[j] << ")";
                break;
            }
        }
        if (sys.pairing_ambiguous) break;
        Index match = -1;
        int count = 0;
        for (Index k = 0; k < n; ++k) {
            if (std::abs(mu[k] - std::conj(sys.eigenvalues[j])) < cluster) {
                match = k;
                ++count;
            }
        }
        if (count != 1 || taken[static_cast<std::size_t>(match)]) {
            sys.pairing_ambiguous = true;
            diagnostic << "eigenvalue " << j << " (E = " << sys.eigenvalues[j] << ") has " << count
                       << " H^dagger partners within " << cluster;
            break;
        }
        taken[static_cast<std::size_t>(match)] = true;
        partner[static_cast<std::size_t>(j)] = match;
    }

    if (!sys.pairing_ambiguous) {
        sys.left.resize(n, n);
        for (Index j = 0; j < n; ++j) {
            const Vector v = w.col(partner[static_cast<std::size_t>(j)]);
            const cplx overlap = v.dot(sys.right.col(j));  // <v|phi_j>
            if (std::abs(overlap) < 1e-14) {
                sys.pairing_ambiguous = true;
                diagnostic << "left/right overlap vanishes for eigenvalue " << j;
                break;
            }
            sys.left.col(j) = v / std::conj(overlap);
        }
    }

    if (sys.pairing_ambiguous) {
        if (options.strict_pairing) throw DegeneracyError("ambiguous eigenvalue pairing: " + diagnostic.str());
        sys.route = LeftVectorRoute::Inverse;
        sys.left = inverse_left;
        sys.route_discrepancy = 0.0;
    } else {
        sys.route = LeftVectorRoute::AdjointEigensolve;
        sys.route_discrepancy = relative_frobenius(sys.left, inverse_left);
    }
    return sys;
}

BiorthogonalSystem biorthogonal_eig(const Operator& h, const EigOptions& options) {
    return biorthogonal_eig(h.matrix(), options);
}

double resolution_residual(const BiorthogonalSystem& sys, const Matrix& h) {
    const Matrix rebuilt = sys.right * sys.eigenvalues.asDiagonal() * sys.left.adjoint();
    return relative_frobenius(rebuilt, h);
}

double resolution_residual(const BiorthogonalSystem& sys, const Operator& h) {
    return resolution_residual(sys, h.matrix());
}

}  // namespace nhsym
