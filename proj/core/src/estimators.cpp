#include "tailkit/estimators.hpp"

#include "tailkit/errors.hpp"
#include "tailkit/normal.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace tailkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Streaming mean / M2 with an associative merge (Chan et al.).
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(count + o.count);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.count) / n;
        m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double std_error() const { return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

// Joint moments of (a, b) for ratio estimators.
struct PairMoments {
    std::uint64_t count = 0;
    double mean_a = 0.0, mean_b = 0.0;
    double caa = 0.0, cbb = 0.0, cab = 0.0;

    void add(double a, double b) {
        ++count;
        const double n = static_cast<double>(count);
        const double da = a - mean_a;
        const double db = b - mean_b;
        mean_a += da / n;
        mean_b += db / n;
        caa += da * (a - mean_a);
        cbb += db * (b - mean_b);
        cab += da * (b - mean_b);
    }

    void merge(const PairMoments& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n1 = static_cast<double>(count);
        const double n2 = static_cast<double>(o.count);
        const double n = n1 + n2;
        const double da = o.mean_a - mean_a;
        const double db = o.mean_b - mean_b;
        caa += o.caa + da * da * n1 * n2 / n;
        cbb += o.cbb + db * db * n1 * n2 / n;
        cab += o.cab + da * db * n1 * n2 / n;
        mean_a += da * n2 / n;
        mean_b += db * n2 / n;
        count += o.count;
    }
};

// Indicator counts; exact integer merge, converted to moments at the end.
struct Hits {
    std::uint64_t count = 0;
    std::uint64_t hits = 0;

    void add(bool hit) {
        ++count;
        hits += hit;
    }
    void merge(const Hits& o) {
        count += o.count;
        hits += o.hits;
    }
    Moments moments() const {
        Moments m;
        m.count = count;
        if (count == 0) return m;
        const double n = static_cast<double>(count);
        m.mean = static_cast<double>(hits) / n;
        m.m2 = n * m.mean * (1.0 - m.mean);
        return m;
    }
};

struct HitPair {
    Hits sum;
    Hits max;

    void merge(const HitPair& o) {
        sum.merge(o.sum);
        max.merge(o.max);
    }
};

// Runs body(rng, count, acc) on each worker's stream and merges the partial
// accumulators in worker order.
template <class Acc, class Body>
Acc run_sharded(const McOptions& opts, Body&& body) {
    if (opts.n_samples == 0) throw DomainError("Monte Carlo estimators need n_samples >= 1");
    const unsigned w = std::max(1u, opts.workers);
    std::vector<Acc> parts(w);
    std::vector<std::exception_ptr> errors(w);
    auto job = [&](unsigned k) {
        try {
            Rng rng = Rng::for_stream(opts.seed, k);
            const std::uint64_t count = opts.n_samples / w + (k < opts.n_samples % w ? 1 : 0);
            body(rng, count, parts[k]);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };
    if (w == 1) {
        job(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(w);
        for (unsigned k = 0; k < w; ++k) threads.emplace_back(job, k);
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    Acc total;
    for (auto& p : parts) total.merge(p);
    return total;
}

Estimate mc_estimate(const Moments& m, Method method, const McOptions& opts) {
    Estimate e;
    e.value = m.mean;
    e.std_error = m.std_error();
    e.n_samples = m.count;
    e.method = method;
    e.seed = opts.seed;
    e.log_value = m.mean > 0.0 ? std::log(m.mean) : -INFINITY;
    return e;
}

PerturbedTailSpec scaled_law(const RegVaryingSpec& L, double c) {
    RegVaryingSpec scaled = L;
    scaled.scale *= c;
    return PerturbedTailSpec(scaled);
}

PerturbedTailSpec validated_common_law(const FactorModelSpec& m) {
    m.validate();
    return PerturbedTailSpec(m.base_tail);
}

void require_simulable(const FactorModelSpec& m) {
    auto check = [&](double c) {
        if (!(c > 0.0)) throw DomainError("factor model simulation requires every c_i > 0");
        if (m.idiosyncratic == Idiosyncratic::standard_normal && c != 1.0)
            throw DomainError("standard-normal idiosyncratic claims have c_i = 1; use l-perturbed for other c_i");
    };
    for (double c : m.c.head) check(c);
    check(m.c.rest);
}

PerturbedTailSpec idiosyncratic_law_for(const FactorModelSpec& m, double c) {
    require_simulable(m);
    if (m.idiosyncratic == Idiosyncratic::standard_normal) return PerturbedTailSpec(RegVaryingSpec::identity());
    return scaled_law(m.base_tail, c);
}

}  // namespace

FactorSampler::FactorSampler(FactorModelSpec m)
    : model_(std::move(m)),
      common_(validated_common_law(model_)),
      rest_law_(idiosyncratic_law_for(model_, model_.c.rest)) {
    head_laws_.reserve(model_.c.head.size());
    for (double c : model_.c.head) head_laws_.push_back(idiosyncratic_law_for(model_, c));
}

const PerturbedTailSpec& FactorSampler::idiosyncratic_law(std::size_t i) const {
    if (i == 0) throw DomainError("claims are indexed from 1");
    return i <= head_laws_.size() ? head_laws_[i - 1] : rest_law_;
}

double FactorSampler::log_xi_survival(std::size_t i, double x) const {
    return idiosyncratic_law(i).log_survival_at_log(x / model_.idiosyncratic_scale());
}

FactorDraw sample_factor_claims(const FactorSampler& s, std::uint64_t n, Rng& rng) {
    FactorDraw d;
    d.z0 = s.sample_z0(rng);
    d.claims.reserve(n);
    const double common = s.model().rho * d.z0;
    const double scale = s.model().idiosyncratic_scale();
    for (std::uint64_t i = 1; i <= n; ++i) d.claims.push_back(std::exp(common + scale * s.sample_zi(i, rng)));
    return d;
}

FactorDraw sample_factor_claims(const FactorModelSpec& m, std::uint64_t n, Rng& rng) {
    return sample_factor_claims(FactorSampler(m), n, rng);
}

void GaussianModel::validate() const {
    switch (kind) {
        case CorrelationModel::Kind::independent: break;
        case CorrelationModel::Kind::equicorrelated:
            if (!(r >= 0.0 && r < 1.0)) throw DomainError("equicorrelated model: r must lie in [0,1)");
            break;
        case CorrelationModel::Kind::explicit_matrix: cholesky(CorrelationModel::from_rows(rows)); break;
    }
}

CorrelationModel GaussianModel::correlation_for(std::size_t n) const {
    switch (kind) {
        case CorrelationModel::Kind::independent: return CorrelationModel::independent(n);
        case CorrelationModel::Kind::equicorrelated: return CorrelationModel::equicorrelated(n, r);
        case CorrelationModel::Kind::explicit_matrix: {
            if (n > rows.size())
                throw DomainError("explicit correlation matrix has " + std::to_string(rows.size()) +
                                  " rows but a path needs " + std::to_string(n) + " claims");
            std::vector<std::vector<double>> block(n);
            for (std::size_t i = 0; i < n; ++i) block[i].assign(rows[i].begin(), rows[i].begin() + n);
            return CorrelationModel::from_rows(block);
        }
    }
    throw DomainError("unknown correlation model");
}

std::optional<FactorModelSpec> GaussianModel::as_factor_model() const {
    if (kind == CorrelationModel::Kind::explicit_matrix) return std::nullopt;
    FactorModelSpec m;
    m.rho = kind == CorrelationModel::Kind::equicorrelated ? std::sqrt(r) : 0.0;
    return m;
}

std::vector<double> sample_gaussian_claims(const CholeskyFactor& chol, Rng& rng) {
    const std::size_t n = chol.size();
    std::vector<double> w(n);
    for (auto& x : w) x = rng.normal();
    std::vector<double> out(n);
    chol.apply(w, out);
    for (auto& x : out) x = std::exp(x);
    return out;
}

CrudePair crude_mc_tail_both(const ClaimModel& model, const ClaimCountSpec& N, double u, const McOptions& opts) {
    if (!(u > 0.0)) throw DomainError("crude_mc_tail requires u > 0");
    N.validate();

    auto record = [u](HitPair& acc, const std::vector<double>& claims) {
        double s = 0.0, mx = 0.0;
        for (double y : claims) {
            s += y;
            mx = std::max(mx, y);
        }
        acc.sum.add(s > u);
        acc.max.add(mx > u);
    };

    const HitPair total = std::visit(
        overloaded{
            [&](const FactorModelSpec& m) {
                const FactorSampler sampler(m);
                return run_sharded<HitPair>(opts, [&](Rng& rng, std::uint64_t count, HitPair& acc) {
                    for (std::uint64_t k = 0; k < count; ++k) {
                        const std::uint64_t n = sample_n(N, rng);
                        record(acc, sample_factor_claims(sampler, n, rng).claims);
                    }
                });
            },
            [&](const GaussianModel& g) {
                g.validate();
                return run_sharded<HitPair>(opts, [&](Rng& rng, std::uint64_t count, HitPair& acc) {
                    std::map<std::uint64_t, CholeskyFactor> factors;
                    for (std::uint64_t k = 0; k < count; ++k) {
                        const std::uint64_t n = sample_n(N, rng);
                        if (n == 0) {
                            record(acc, {});
                            continue;
                        }
                        auto it = factors.find(n);
                        if (it == factors.end()) it = factors.emplace(n, cholesky(g.correlation_for(n))).first;
                        record(acc, sample_gaussian_claims(it->second, rng));
                    }
                });
            },
        },
        model);
    return CrudePair{mc_estimate(total.sum.moments(), Method::crude, opts),
                     mc_estimate(total.max.moments(), Method::crude, opts)};
}

Estimate crude_mc_tail(const ClaimModel& model, const ClaimCountSpec& N, double u, Statistic stat,
                       const McOptions& opts) {
    const CrudePair both = crude_mc_tail_both(model, N, u, opts);
    return stat == Statistic::sum ? both.sum : both.max;
}

Estimate crude_product_tail(const ProductTailParams& p, double u, const McOptions& opts) {
    p.validate();
    if (!(u > 0.0)) throw DomainError("crude_product_tail requires u > 0");
    const PerturbedTailSpec first(p.L1);
    const PerturbedTailSpec second(p.L2);
    const double log_u = std::log(u);
    const Hits h = run_sharded<Hits>(opts, [&](Rng& rng, std::uint64_t count, Hits& acc) {
        for (std::uint64_t k = 0; k < count; ++k) {
            const double x = p.sigma1 * first.sample_log(rng) + p.sigma2 * second.sample_log(rng);
            acc.add(x > log_u);
        }
    });
    return mc_estimate(h.moments(), Method::crude, opts);
}

Estimate ak_conditional_tail(const FactorModelSpec& m, const ClaimCountSpec& N, double u, const McOptions& opts,
                             Statistic stat, const AkOptions& ak) {
    if (!(u > 0.0)) throw DomainError("ak_conditional_tail requires u > 0");
    N.validate();
    if (!m.c.is_constant()) throw DomainError("ak_conditional_tail requires constant c_i (iid residual terms)");
    const FactorSampler sampler(m);
    const double log_u = std::log(u);
    const double rho = m.rho;
    const double scale = m.idiosyncratic_scale();
    const double shift = (ak.shift_common_factor && rho > 0.0 && log_u > 0.0) ? rho * log_u : 0.0;
    const PerturbedTailSpec& common = sampler.common_law();

    const Moments total = run_sharded<Moments>(opts, [&](Rng& rng, std::uint64_t count, Moments& acc) {
        for (std::uint64_t k = 0; k < count; ++k) {
            const std::uint64_t n = sample_n(N, rng);
            double z0 = 0.0;
            double weight = 1.0;
            if (shift > 0.0) {
                z0 = shift + rng.normal();
                weight = std::exp(common.log_density_at_log(z0) - log_std_normal_pdf(z0 - shift));
            } else {
                z0 = sampler.sample_z0(rng);
            }
            if (n == 0) {
                acc.add(0.0);
                continue;
            }
            const double nd = static_cast<double>(n);
            const double log_v = log_u - rho * z0;  // v = u e^{-rho Z0}

            if (stat == Statistic::max) {
                const double fbar = std::exp(sampler.log_xi_survival(1, log_v));
                acc.add(weight * -std::expm1(nd * std::log1p(-fbar)));
                continue;
            }

            double s = 0.0, mx = 0.0;
            for (std::uint64_t j = 1; j < n; ++j) {
                const double xi = std::exp(scale * sampler.sample_zi(j, rng));
                s += xi;
                mx = std::max(mx, xi);
            }
            double log_thr = log_v;
            if (n > 1) {
                if (log_v > 700.0) {
                    log_thr = std::max(std::log(mx), log_v + std::log1p(-s * std::exp(-log_v)));
                } else {
                    log_thr = std::log(std::max(mx, std::exp(log_v) - s));
                }
            }
            acc.add(weight * nd * std::exp(sampler.log_xi_survival(1, log_thr)));
        }
    });
    return mc_estimate(total, Method::conditional_ak, opts);
}

ShareEstimate big_jump_share(const FactorModelSpec& m, std::uint64_t n, double u, const McOptions& opts) {
    if (n < 1) throw DomainError("big_jump_share requires n >= 1");
    if (!(u > 1.0)) throw DomainError("big_jump_share requires u > 1");
    const FactorSampler sampler(m);
    const double log_u = std::log(u);
    const double rho = m.rho;
    const double scale = m.idiosyncratic_scale();
    const double shift = scale * log_u;
    const double nd = static_cast<double>(n);

    const PairMoments total = run_sharded<PairMoments>(opts, [&](Rng& rng, std::uint64_t count, PairMoments& acc) {
        std::vector<double> z(n);
        for (std::uint64_t k = 0; k < count; ++k) {
            const auto pick = std::min<std::uint64_t>(n - 1, static_cast<std::uint64_t>(rng.uniform() * nd));
            for (std::uint64_t j = 0; j < n; ++j)
                z[j] = j == pick ? shift + rng.normal() : sampler.sample_zi(j + 1, rng);
            // proposal / target density ratio of the mixture over the shifted index
            double ratio = 0.0;
            double top = -INFINITY;
            for (std::uint64_t j = 0; j < n; ++j) {
                ratio += std::exp(log_std_normal_pdf(z[j] - shift) -
                                  sampler.idiosyncratic_law(j + 1).log_density_at_log(z[j]));
                top = std::max(top, scale * z[j]);
            }
            const double weight = nd / ratio;
            double w_sum = 0.0;
            for (std::uint64_t j = 0; j < n; ++j) w_sum += std::exp(scale * z[j] - top);
            const double log_w = top + std::log(w_sum);
            const double share = 1.0 / w_sum;
            double p = 0.0;
            if (rho > 0.0)
                p = std::exp(sampler.common_law().log_survival_at_log((log_u - log_w) / rho));
            else
                p = log_w > log_u ? 1.0 : 0.0;
            acc.add(weight * p * share, weight * p);
        }
    });

    ShareEstimate out;
    const double cnt = static_cast<double>(total.count);
    const double var_b = total.count > 1 ? total.cbb / (cnt - 1.0) : 0.0;
    out.exceedance.value = total.mean_b;
    out.exceedance.std_error = std::sqrt(var_b / cnt);
    out.exceedance.n_samples = total.count;
    out.exceedance.method = Method::conditional_ak;
    out.exceedance.seed = opts.seed;
    out.exceedance.log_value = total.mean_b > 0.0 ? std::log(total.mean_b) : -INFINITY;
    if (total.mean_b > 0.0) {
        const double r = total.mean_a / total.mean_b;
        const double denom = cnt > 1.0 ? cnt - 1.0 : 1.0;
        const double var = (total.caa - 2.0 * r * total.cab + r * r * total.cbb) / denom;
        out.share = r;
        out.std_error = std::sqrt(std::max(0.0, var) / cnt) / total.mean_b;
    }
    return out;
}

}  // namespace tailkit
