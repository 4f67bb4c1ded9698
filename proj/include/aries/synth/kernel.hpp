#pragma once

#include "aries/core/error.hpp"
#include "aries/core/io.hpp"
#include "aries/core/random.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace aries::synth {

struct Rbf {
    double length_scale = 1.0;
};

struct Matern {
    double length_scale = 1.0;
    /// One of 0.5, 1.5, 2.5 (closed forms).
    double nu = 1.5;
};

struct RationalQuadratic {
    double length_scale = 1.0;
    double alpha = 1.0;
};

/// Periodic kernel; `periodicity` is in the same units as t.
struct ExpSineSquared {
    double length_scale = 1.0;
    double periodicity = 24.0;
};

struct DotProduct {
    double sigma0 = 1.0;
};

struct WhiteNoise {
    double noise_level = 1.0;
};

struct ConstantKernel {
    double constant_value = 1.0;
};

using KernelSpec = std::variant<Rbf, Matern, RationalQuadratic, ExpSineSquared, DotProduct, WhiteNoise, ConstantKernel>;

enum class KernelFamily { Rbf, Matern, RationalQuadratic, ExpSineSquared, DotProduct, WhiteNoise, Constant };

inline constexpr std::array<KernelFamily, 7> kAllFamilies = {
    KernelFamily::Rbf,        KernelFamily::Matern,     KernelFamily::RationalQuadratic, KernelFamily::ExpSineSquared,
    KernelFamily::DotProduct, KernelFamily::WhiteNoise, KernelFamily::Constant};

inline KernelFamily family_of(const KernelSpec& k) { return static_cast<KernelFamily>(k.index()); }

inline std::string family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Rbf: return "RBF";
        case KernelFamily::Matern: return "Matern";
        case KernelFamily::RationalQuadratic: return "RationalQuadratic";
        case KernelFamily::ExpSineSquared: return "ExpSineSquared";
        case KernelFamily::DotProduct: return "DotProduct";
        case KernelFamily::WhiteNoise: return "WhiteNoise";
        case KernelFamily::Constant: return "Constant";
    }
    return "?";
}

inline KernelFamily parse_family(const std::string& name) {
    for (KernelFamily f : kAllFamilies) {
        if (family_name(f) == name) {
            return f;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown kernel family '" + name + "'");
}

enum class KernelOp { Add, Multiply };

/// 1-3 leaves combined by a left fold: ((k0 op0 k1) op1 k2).
struct CompositeKernel {
    std::vector<KernelSpec> leaves;
    std::vector<KernelOp> ops;

    void validate_shape() const {
        if (leaves.empty() || leaves.size() > 3 || ops.size() + 1 != leaves.size()) {
            throw Error(ErrorCode::InvalidArgument, "composite kernel needs 1-3 leaves and one op between each");
        }
    }
};

inline void validate(const KernelSpec& k) {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
        }
    };
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rbf>) {
                positive(s.length_scale, "length_scale");
            } else if constexpr (std::is_same_v<T, Matern>) {
                positive(s.length_scale, "length_scale");
                if (s.nu != 0.5 && s.nu != 1.5 && s.nu != 2.5) {
                    throw Error(ErrorCode::InvalidArgument, "Matern nu must be 0.5, 1.5 or 2.5");
                }
            } else if constexpr (std::is_same_v<T, RationalQuadratic>) {
                positive(s.length_scale, "length_scale");
                positive(s.alpha, "alpha");
            } else if constexpr (std::is_same_v<T, ExpSineSquared>) {
                positive(s.length_scale, "length_scale");
                if (!(s.periodicity >= 2.0) || !std::isfinite(s.periodicity)) {
                    throw Error(ErrorCode::InvalidArgument, "periodicity must be at least 2 grid steps");
                }
            } else if constexpr (std::is_same_v<T, DotProduct>) {
                if (!(s.sigma0 >= 0.0)) {
                    throw Error(ErrorCode::InvalidArgument, "sigma0 must be non-negative");
                }
            } else if constexpr (std::is_same_v<T, WhiteNoise>) {
                positive(s.noise_level, "noise_level");
            } else {
                positive(s.constant_value, "constant_value");
            }
        },
        k);
}

inline double kernel_eval(const KernelSpec& k, double t, double t_prime) {
    const double d = std::abs(t - t_prime);
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rbf>) {
                const double r = d / s.length_scale;
                return std::exp(-0.5 * r * r);
            } else if constexpr (std::is_same_v<T, Matern>) {
                const double r = d / s.length_scale;
                if (s.nu == 0.5) {
                    return std::exp(-r);
                }
                if (s.nu == 1.5) {
                    const double a = std::sqrt(3.0) * r;
                    return (1.0 + a) * std::exp(-a);
                }
                const double a = std::sqrt(5.0) * r;
                return (1.0 + a + a * a / 3.0) * std::exp(-a);
            } else if constexpr (std::is_same_v<T, RationalQuadratic>) {
                return std::pow(1.0 + d * d / (2.0 * s.alpha * s.length_scale * s.length_scale), -s.alpha);
            } else if constexpr (std::is_same_v<T, ExpSineSquared>) {
                const double sn = std::sin(std::numbers::pi * d / s.periodicity);
                return std::exp(-2.0 * sn * sn / (s.length_scale * s.length_scale));
            } else if constexpr (std::is_same_v<T, DotProduct>) {
                return s.sigma0 * s.sigma0 + t * t_prime;
            } else if constexpr (std::is_same_v<T, WhiteNoise>) {
                return t == t_prime ? s.noise_level : 0.0;
            } else {
                return s.constant_value;
            }
        },
        k);
}

inline void validate(const CompositeKernel& k) {
    k.validate_shape();
    for (const auto& leaf : k.leaves) {
        validate(leaf);
    }
}

inline double kernel_eval(const CompositeKernel& k, double t, double t_prime) {
    double acc = kernel_eval(k.leaves.front(), t, t_prime);
    for (std::size_t i = 1; i < k.leaves.size(); ++i) {
        const double v = kernel_eval(k.leaves[i], t, t_prime);
        acc = k.ops[i - 1] == KernelOp::Add ? acc + v : acc * v;
    }
    return acc;
}

inline std::string describe(const KernelSpec& k) {
    using io::format_double;
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rbf>) {
                return "RBF(length_scale=" + format_double(s.length_scale) + ")";
            } else if constexpr (std::is_same_v<T, Matern>) {
                return "Matern(length_scale=" + format_double(s.length_scale) + ", nu=" + format_double(s.nu) + ")";
            } else if constexpr (std::is_same_v<T, RationalQuadratic>) {
                return "RationalQuadratic(length_scale=" + format_double(s.length_scale) +
                       ", alpha=" + format_double(s.alpha) + ")";
            } else if constexpr (std::is_same_v<T, ExpSineSquared>) {
                return "ExpSineSquared(length_scale=" + format_double(s.length_scale) +
                       ", periodicity=" + format_double(s.periodicity) + ")";
            } else if constexpr (std::is_same_v<T, DotProduct>) {
                return "DotProduct(sigma0=" + format_double(s.sigma0) + ")";
            } else if constexpr (std::is_same_v<T, WhiteNoise>) {
                return "WhiteNoise(noise_level=" + format_double(s.noise_level) + ")";
            } else {
                return "Constant(constant_value=" + format_double(s.constant_value) + ")";
            }
        },
        k);
}

/// Infix expression with explicit left-fold parentheses, e.g.
/// "(RBF(length_scale=0.1) + WhiteNoise(noise_level=0.01)) * DotProduct(sigma0=0.5)".
inline std::string describe(const CompositeKernel& k) {
    std::string out = describe(k.leaves.front());
    for (std::size_t i = 1; i < k.leaves.size(); ++i) {
        if (i > 1) {
            out = "(" + out + ")";
        }
        out += k.ops[i - 1] == KernelOp::Add ? " + " : " * ";
        out += describe(k.leaves[i]);
    }
    return out;
}

/// Parameter ranges for random kernels. Length scales live on the unit
/// interval grid; periodicities are in grid steps.
struct KernelParamRanges {
    std::string version = "aries.kernel-ranges/1";
    double length_scale_min = 0.02;
    double length_scale_max = 1.0;
    std::vector<double> nu_choices = {0.5, 1.5, 2.5};
    std::vector<double> periodicity_steps = {12, 24, 48, 96, 168};
    double alpha_min = 0.1;
    double alpha_max = 10.0;
    double sigma0_min = 0.0;
    double sigma0_max = 1.0;
    double noise_level_min = 1e-3;
    double noise_level_max = 0.5;
    double constant_min = 0.1;
    double constant_max = 2.0;

    nlohmann::json to_json() const {
        return nlohmann::json{{"version", version},
                              {"length_scale", {{"dist", "log-uniform"}, {"min", length_scale_min}, {"max", length_scale_max}}},
                              {"nu", nu_choices},
                              {"periodicity_steps", periodicity_steps},
                              {"alpha", {{"dist", "log-uniform"}, {"min", alpha_min}, {"max", alpha_max}}},
                              {"sigma0", {{"dist", "uniform"}, {"min", sigma0_min}, {"max", sigma0_max}}},
                              {"noise_level", {{"dist", "log-uniform"}, {"min", noise_level_min}, {"max", noise_level_max}}},
                              {"constant_value", {{"dist", "uniform"}, {"min", constant_min}, {"max", constant_max}}}};
    }

    static KernelParamRanges from_json(const nlohmann::json& j) {
        KernelParamRanges r;
        r.version = j.at("version").get<std::string>();
        r.length_scale_min = j.at("length_scale").at("min");
        r.length_scale_max = j.at("length_scale").at("max");
        r.nu_choices = j.at("nu").get<std::vector<double>>();
        r.periodicity_steps = j.at("periodicity_steps").get<std::vector<double>>();
        r.alpha_min = j.at("alpha").at("min");
        r.alpha_max = j.at("alpha").at("max");
        r.sigma0_min = j.at("sigma0").at("min");
        r.sigma0_max = j.at("sigma0").at("max");
        r.noise_level_min = j.at("noise_level").at("min");
        r.noise_level_max = j.at("noise_level").at("max");
        r.constant_min = j.at("constant_value").at("min");
        r.constant_max = j.at("constant_value").at("max");
        return r;
    }
};

namespace detail {

inline double log_uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

inline double uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng);
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& options) {
    std::uniform_int_distribution<std::size_t> u(0, options.size() - 1);
    return options[u(rng)];
}

} // namespace detail

/// Draws one leaf of the given family. ExpSineSquared periodicity is
/// returned in grid steps.
inline KernelSpec sample_leaf(KernelFamily family, Rng& rng, const KernelParamRanges& r = {}) {
    switch (family) {
        case KernelFamily::Rbf: return Rbf{detail::log_uniform(rng, r.length_scale_min, r.length_scale_max)};
        case KernelFamily::Matern: {
            const double l = detail::log_uniform(rng, r.length_scale_min, r.length_scale_max);
            return Matern{l, detail::pick(rng, r.nu_choices)};
        }
        case KernelFamily::RationalQuadratic: {
            const double l = detail::log_uniform(rng, r.length_scale_min, r.length_scale_max);
            return RationalQuadratic{l, detail::log_uniform(rng, r.alpha_min, r.alpha_max)};
        }
        case KernelFamily::ExpSineSquared: {
            const double l = detail::log_uniform(rng, r.length_scale_min, r.length_scale_max);
            return ExpSineSquared{l, detail::pick(rng, r.periodicity_steps)};
        }
        case KernelFamily::DotProduct: return DotProduct{detail::uniform(rng, r.sigma0_min, r.sigma0_max)};
        case KernelFamily::WhiteNoise:
            return WhiteNoise{detail::log_uniform(rng, r.noise_level_min, r.noise_level_max)};
        case KernelFamily::Constant: return ConstantKernel{detail::uniform(rng, r.constant_min, r.constant_max)};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown kernel family");
}

/// j ~ U{1..max_leaves}, leaves uniform over `bank`, ops uniform over {+, *}.
inline CompositeKernel sample_composite(Rng& rng, std::span<const KernelFamily> bank = kAllFamilies,
                                        std::size_t max_leaves = 3, const KernelParamRanges& ranges = {}) {
    if (bank.empty() || max_leaves < 1 || max_leaves > 3) {
        throw Error(ErrorCode::InvalidArgument, "kernel bank must be non-empty and J in [1,3]");
    }
    std::uniform_int_distribution<std::size_t> count(1, max_leaves);
    std::uniform_int_distribution<std::size_t> which(0, bank.size() - 1);
    std::uniform_int_distribution<int> op(0, 1);
    CompositeKernel k;
    const std::size_t j = count(rng);
    for (std::size_t i = 0; i < j; ++i) {
        k.leaves.push_back(sample_leaf(bank[which(rng)], rng, ranges));
        if (i > 0) {
            k.ops.push_back(op(rng) == 0 ? KernelOp::Add : KernelOp::Multiply);
        }
    }
    return k;
}

} // namespace aries::synth
