#pragma once

#include "aries/core/error.hpp"
#include "aries/core/parallel.hpp"
#include "aries/core/random.hpp"
#include "aries/core/series.hpp"
#include "aries/synth/kernel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace aries::synth {

inline constexpr double kMaxJitter = 1e-2;

/// Evaluates on the grid t_i = i/length. ExpSineSquared periodicities are
/// given in grid steps and rescaled here. The diagonal carries no jitter.
inline Eigen::MatrixXd build_covariance(const CompositeKernel& k, std::size_t length) {
    validate(k);
    if (length < 2) {
        throw Error(ErrorCode::InvalidArgument, "covariance needs length >= 2");
    }
    CompositeKernel unit = k;
    for (auto& leaf : unit.leaves) {
        if (auto* p = std::get_if<ExpSineSquared>(&leaf)) {
            p->periodicity /= static_cast<double>(length);
        }
    }
    const auto n = static_cast<Eigen::Index>(length);
    Eigen::MatrixXd cov(n, n);
    const double inv = 1.0 / static_cast<double>(length);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ti = static_cast<double>(i) * inv;
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = kernel_eval(unit, ti, static_cast<double>(j) * inv);
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return cov;
}

struct Factorization {
    Eigen::MatrixXd lower;
    double jitter = 0.0;
};

/// Cholesky with diagonal jitter escalated by x10 from `jitter` up to 1e-2.
/// Returns nullopt when every level fails.
inline std::optional<Factorization> factorize(const Eigen::MatrixXd& cov, double jitter = 1e-6) {
    if (!(jitter > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "jitter must be positive");
    }
    for (double j = jitter; j <= kMaxJitter * (1.0 + 1e-9); j *= 10.0) {
        Eigen::MatrixXd a = cov;
        a.diagonal().array() += j;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() == Eigen::Success) {
            return Factorization{llt.matrixL(), j};
        }
    }
    return std::nullopt;
}

/// One GP prior draw x = L z. Throws NotPositiveDefinite if no jitter level works.
inline std::vector<double> sample_gp(const CompositeKernel& k, std::size_t length, Rng& rng, double jitter = 1e-6,
                                     double* used_jitter = nullptr) {
    auto f = factorize(build_covariance(k, length), jitter);
    if (!f) {
        throw Error(ErrorCode::NotPositiveDefinite, "covariance of " + describe(k) + " not factorizable");
    }
    if (used_jitter != nullptr) {
        *used_jitter = f->jitter;
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(static_cast<Eigen::Index>(length));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z[i] = normal(rng);
    }
    const Eigen::VectorXd x = f->lower.triangularView<Eigen::Lower>() * z;
    return {x.data(), x.data() + x.size()};
}

struct SynthConfig {
    std::size_t n_series = 200;
    std::size_t length = 1024;
    std::uint64_t seed = 0;
    double jitter = 1e-6;
    std::size_t max_leaves = 3;
    bool matern_mix = true;
    /// Empty means the full bank (minus Matern when matern_mix is false).
    std::vector<KernelFamily> families;
    std::size_t max_retries = 5;
    KernelParamRanges ranges;

    std::vector<KernelFamily> bank() const {
        std::vector<KernelFamily> out;
        for (KernelFamily f : families.empty() ? std::vector<KernelFamily>(kAllFamilies.begin(), kAllFamilies.end())
                                               : families) {
            if (f == KernelFamily::Matern && !matern_mix) {
                continue;
            }
            out.push_back(f);
        }
        return out;
    }

    void validate() const {
        if (length < 16) {
            throw Error(ErrorCode::InvalidArgument, "synth length must be >= 16");
        }
        if (n_series < 1) {
            throw Error(ErrorCode::InvalidArgument, "synth n_series must be >= 1");
        }
        if (max_leaves < 1 || max_leaves > 3) {
            throw Error(ErrorCode::InvalidArgument, "J must be in [1,3]");
        }
        if (!(jitter > 0.0) || jitter > kMaxJitter) {
            throw Error(ErrorCode::InvalidArgument, "jitter must be in (0, 1e-2]");
        }
        if (bank().empty()) {
            throw Error(ErrorCode::InvalidArgument, "kernel bank is empty");
        }
    }
};

struct Provenance {
    std::string id;
    std::string kernel_expr;
    std::uint64_t seed = 0;
    std::size_t attempts = 1;
    double jitter = 0.0;
};

struct SynthDataset {
    SeriesSet series;
    std::vector<Provenance> provenance;
};

inline std::string synth_id(std::size_t index) { return "synth-" + std::to_string(index); }

/// Each series draws from its own stream seeded by derive_seed(seed, index),
/// so the output does not depend on the thread count.
inline SynthDataset generate_dataset(const SynthConfig& cfg, std::size_t threads = 1) {
    cfg.validate();
    const auto bank = cfg.bank();
    struct Slot {
        std::vector<double> values;
        Provenance prov;
    };
    std::vector<Slot> slots(cfg.n_series);
    parallel_for(cfg.n_series, threads, [&](std::size_t i) {
        const std::uint64_t s = derive_seed(cfg.seed, i);
        Rng rng(s);
        for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt) {
            CompositeKernel k = sample_composite(rng, bank, cfg.max_leaves, cfg.ranges);
            auto f = factorize(build_covariance(k, cfg.length), cfg.jitter);
            if (!f) {
                continue;
            }
            std::normal_distribution<double> normal(0.0, 1.0);
            Eigen::VectorXd z(static_cast<Eigen::Index>(cfg.length));
            for (Eigen::Index t = 0; t < z.size(); ++t) {
                z[t] = normal(rng);
            }
            const Eigen::VectorXd x = f->lower.triangularView<Eigen::Lower>() * z;
            slots[i].values.assign(x.data(), x.data() + x.size());
            slots[i].prov = Provenance{synth_id(i), describe(k), s, attempt + 1, f->jitter};
            return;
        }
        throw Error(ErrorCode::NotPositiveDefinite,
                    synth_id(i) + ": no factorizable kernel after " + std::to_string(cfg.max_retries) + " retries");
    });
    SynthDataset out;
    for (auto& slot : slots) {
        out.series.add(TimeSeries(slot.prov.id, std::move(slot.values)));
        out.provenance.push_back(std::move(slot.prov));
    }
    out.series.metadata["generator"] = "gp-kernel-composition";
    out.series.metadata["seed"] = std::to_string(cfg.seed);
    out.series.metadata["length"] = std::to_string(cfg.length);
    return out;
}

inline nlohmann::json to_json(const Provenance& p) {
    return nlohmann::json{{"id", p.id}, {"kernel_expr", p.kernel_expr}, {"seed", p.seed}};
}

inline void write_provenance_jsonl(std::ostream& out, const std::vector<Provenance>& prov) {
    for (const auto& p : prov) {
        out << to_json(p).dump() << '\n';
    }
}

} // namespace aries::synth
