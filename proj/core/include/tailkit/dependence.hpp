#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tailkit {

/// An n x n correlation matrix, row-major. Immutable once constructed;
/// the constructors check symmetry, unit diagonal and entries in [-1,1].
/// Positive semidefiniteness is checked by cholesky().
class CorrelationModel {
public:
    enum class Kind { independent, equicorrelated, explicit_matrix };

    static CorrelationModel independent(std::size_t n);
    static CorrelationModel equicorrelated(std::size_t n, double r);
    /// Throws DomainError when the matrix is not a symmetric correlation matrix.
    static CorrelationModel from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    Kind kind() const { return kind_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> entries() const { return entries_; }

    /// Largest off-diagonal entry; 0 for n = 1.
    double max_off_diagonal() const;

private:
    CorrelationModel(std::size_t n, Kind kind, std::vector<double> entries)
        : n_(n), kind_(kind), entries_(std::move(entries)) {}

    std::size_t n_;
    Kind kind_;
    std::vector<double> entries_;
};

/// Lower-triangular T with T T^t = Sigma, row-major with zeros above the diagonal.
class CholeskyFactor {
public:
    CholeskyFactor(std::size_t n, std::vector<double> lower) : n_(n), lower_(std::move(lower)) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return lower_[i * n_ + j]; }

    /// out = T * w
    void apply(std::span<const double> w, std::span<double> out) const;

    /// Entrywise max |T T^t - Sigma|.
    double reconstruction_error(const CorrelationModel& m) const;

private:
    std::size_t n_;
    std::vector<double> lower_;
};

inline constexpr double kPivotTolerance = -1e-10;

/// Throws FactorizationError naming the pivot when a pivot falls below -1e-10.
/// Pivots in [-1e-10, 0] are clamped to 0 (matrices on the PSD boundary).
CholeskyFactor cholesky(const CorrelationModel& m);

/// Pairwise correlation of X_i = rho Z0 + sqrt(1-rho^2) Z_i: rho^2.
double factor_correlation(double rho);

CorrelationModel build_equicorrelated(std::size_t n, double r);

/// Parameters of the correlation-decay condition: c* > 8, eta > 0, delta > 0.
struct CnuParams {
    double c_star = 9.0;
    double eta = 0.5;
    double delta = 0.1;

    void validate() const;
};

/// floor((1+eta) (log u)^2 / (2 log(1+delta))), at least 1. Needs u > 1.
std::uint64_t n_of_u(double u, const CnuParams& p);
std::uint64_t n_of_u_at_log(double log_u, const CnuParams& p);

/// 4 log(log u) / log u for u > e. May exceed 1 for moderate u; callers guard.
double epsilon_of_u(double u);
double epsilon_of_u_at_log(double log_u);

/// The sequence n -> rho_n bounding pairwise correlations.
struct RhoSequence {
    enum class Kind { constant, log_sqrt, table };

    Kind kind = Kind::constant;
    double value = 0.0;          // constant value, or c in 1 - c log(n)/sqrt(n)
    std::vector<double> table;   // rho_1, rho_2, ...; last entry repeats

    static RhoSequence constant(double v) { return {Kind::constant, v, {}}; }
    static RhoSequence log_sqrt(double c) { return {Kind::log_sqrt, c, {}}; }
    static RhoSequence from_table(std::vector<double> t) { return {Kind::table, 0.0, std::move(t)}; }

    double at(std::uint64_t n) const;
    std::string describe() const;
};

struct RhonReport {
    bool holds = true;
    double bound = 0.0;  // max(rho_n, rho)
    std::vector<std::pair<std::size_t, std::size_t>> violations;  // (i, j), i < j, 0-based
};

/// Every off-diagonal entry <= max(rho_n, rho). rho must lie in (0,1).
RhonReport check_rhon(const CorrelationModel& m, double rho_n, double rho);

struct CnuReport {
    bool holds = false;
    std::uint64_t n_u = 0;
    double rho_n_u = 0.0;
    double bound = 0.0;      // 1 - c* log(log u)/log u
    double epsilon = 0.0;    // epsilon_of_u(u), for reporting
};

/// rho_{n(u)} <= 1 - c* log(log u) / log u. Needs u > e.
CnuReport check_cnu(const RhoSequence& seq, double u, const CnuParams& p);
CnuReport check_cnu_at_log(const RhoSequence& seq, double log_u, const CnuParams& p);

}  // namespace tailkit
