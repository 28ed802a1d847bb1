#include "tailkit/dependence.hpp"

#include "tailkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tailkit {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void require_r(double r) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("equicorrelated model: r must lie in [0,1)");
}

}  // namespace

CorrelationModel CorrelationModel::independent(std::size_t n) {
    if (n == 0) throw DomainError("correlation model: n must be >= 1");
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return CorrelationModel(n, Kind::independent, std::move(e));
}

CorrelationModel CorrelationModel::equicorrelated(std::size_t n, double r) {
    if (n == 0) throw DomainError("correlation model: n must be >= 1");
    require_r(r);
    std::vector<double> e(n * n, r);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return CorrelationModel(n, Kind::equicorrelated, std::move(e));
}

CorrelationModel CorrelationModel::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw DomainError("correlation matrix is empty");
    std::vector<double> e;
    e.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw DomainError("correlation matrix must be square");
        for (double x : rows[i]) {
            if (!std::isfinite(x) || x < -1.0 || x > 1.0)
                throw DomainError("correlation matrix entries must lie in [-1,1]");
            e.push_back(x);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(e[i * n + i] - 1.0) > kSymmetryTolerance)
            throw DomainError("correlation matrix diagonal must be 1 (row " + std::to_string(i) + ")");
        e[i * n + i] = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(e[i * n + j] - e[j * n + i]) > kSymmetryTolerance)
                throw DomainError("correlation matrix is not symmetric at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
            e[j * n + i] = e[i * n + j];
        }
    }
    return CorrelationModel(n, Kind::explicit_matrix, std::move(e));
}

double CorrelationModel::max_off_diagonal() const {
    double m = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (i != j) {
                m = any ? std::max(m, (*this)(i, j)) : (*this)(i, j);
                any = true;
            }
    return m;
}

void CholeskyFactor::apply(std::span<const double> w, std::span<double> out) const {
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        const double* row = &lower_[i * n_];
        for (std::size_t j = 0; j <= i; ++j) acc += row[j] * w[j];
        out[i] = acc;
    }
}

double CholeskyFactor::reconstruction_error(const CorrelationModel& m) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k <= std::min(i, j); ++k) acc += (*this)(i, k) * (*this)(j, k);
            worst = std::max(worst, std::abs(acc - m(i, j)));
        }
    return worst;
}

CholeskyFactor cholesky(const CorrelationModel& m) {
    const std::size_t n = m.size();
    std::vector<double> t(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= t[j * n + k] * t[j * n + k];
        if (d < kPivotTolerance) {
            std::ostringstream os;
            os << "correlation matrix is not positive semidefinite: pivot " << j << " is " << d;
            throw FactorizationError(j, os.str());
        }
        const double diag = d > 0.0 ? std::sqrt(d) : 0.0;
        t[j * n + j] = diag;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= t[i * n + k] * t[j * n + k];
            t[i * n + j] = diag > 0.0 ? s / diag : 0.0;
        }
    }
    return CholeskyFactor(n, std::move(t));
}

double factor_correlation(double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("factor_correlation: rho must lie in [0,1)");
    return rho * rho;
}

CorrelationModel build_equicorrelated(std::size_t n, double r) { return CorrelationModel::equicorrelated(n, r); }

void CnuParams::validate() const {
    if (!(c_star > 8.0)) throw DomainError("cnu: c* must be > 8");
    if (!(eta > 0.0)) throw DomainError("cnu: eta must be > 0");
    if (!(delta > 0.0)) throw DomainError("cnu: delta must be > 0");
}

std::uint64_t n_of_u_at_log(double log_u, const CnuParams& p) {
    if (!(log_u > 0.0)) throw DomainError("n_of_u requires u > 1");
    if (!(p.eta > 0.0) || !(p.delta > 0.0)) throw DomainError("n_of_u requires eta > 0 and delta > 0");
    const double v = std::floor((1.0 + p.eta) * log_u * log_u / (2.0 * std::log1p(p.delta)));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(v));
}

std::uint64_t n_of_u(double u, const CnuParams& p) {
    if (!(u > 1.0)) throw DomainError("n_of_u requires u > 1");
    return n_of_u_at_log(std::log(u), p);
}

double epsilon_of_u_at_log(double log_u) {
    if (!(log_u > 1.0)) throw DomainError("epsilon_of_u requires u > e");
    return 4.0 * std::log(log_u) / log_u;
}

double epsilon_of_u(double u) {
    if (!(u > 0.0)) throw DomainError("epsilon_of_u requires u > e");
    return epsilon_of_u_at_log(std::log(u));
}

double RhoSequence::at(std::uint64_t n) const {
    if (n == 0) throw DomainError("rho sequence is indexed from 1");
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::log_sqrt: {
            const double nd = static_cast<double>(n);
            return 1.0 - value * std::log(nd) / std::sqrt(nd);
        }
        case Kind::table:
            if (table.empty()) throw DomainError("rho sequence table is empty");
            return n <= table.size() ? table[n - 1] : table.back();
    }
    return value;
}

std::string RhoSequence::describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind) {
        case Kind::constant: os << "constant(" << value << ")"; break;
        case Kind::log_sqrt: os << "1-" << value << "*log(n)/sqrt(n)"; break;
        case Kind::table: os << "table[" << table.size() << "]"; break;
    }
    return os.str();
}

RhonReport check_rhon(const CorrelationModel& m, double rho_n, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("check_rhon: rho must lie in (0,1)");
    RhonReport r;
    r.bound = std::max(rho_n, rho);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (m(i, j) > r.bound) r.violations.emplace_back(i, j);
    r.holds = r.violations.empty();
    return r;
}

CnuReport check_cnu_at_log(const RhoSequence& seq, double log_u, const CnuParams& p) {
    if (!(log_u > 1.0)) throw DomainError("check_cnu requires u > e");
    p.validate();
    CnuReport r;
    r.n_u = n_of_u_at_log(log_u, p);
    r.rho_n_u = seq.at(r.n_u);
    r.bound = 1.0 - p.c_star * std::log(log_u) / log_u;
    r.epsilon = epsilon_of_u_at_log(log_u);
    r.holds = r.rho_n_u <= r.bound;
    return r;
}

CnuReport check_cnu(const RhoSequence& seq, double u, const CnuParams& p) {
    if (!(u > 0.0)) throw DomainError("check_cnu requires u > e");
    return check_cnu_at_log(seq, std::log(u), p);
}

}  // namespace tailkit
