#pragma once

#include "aries/core/error.hpp"
#include "aries/properties/profile.hpp"

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

namespace aries::store {

/// Component order is fixed: stationarity, trend, season strength, season
/// count, volatility, memory, scedasticity, anomaly.
enum class Component : std::size_t {
    Stationarity,
    Trend,
    SeasonStrength,
    SeasonCount,
    Volatility,
    Memory,
    Scedasticity,
    Anomaly,
};

inline constexpr std::size_t kComponents = 8;
inline constexpr std::array<std::uint8_t, kComponents> kComponentBins = {2, 4, 4, 3, 4, 4, 2, 4};

inline constexpr std::array<Component, kComponents> kAllComponents = {
    Component::Stationarity, Component::Trend,  Component::SeasonStrength, Component::SeasonCount,
    Component::Volatility,   Component::Memory, Component::Scedasticity,   Component::Anomaly};

inline std::string component_name(Component c) {
    switch (c) {
        case Component::Stationarity: return "stationarity";
        case Component::Trend: return "trend";
        case Component::SeasonStrength: return "season_strength";
        case Component::SeasonCount: return "season_count";
        case Component::Volatility: return "volatility";
        case Component::Memory: return "memory";
        case Component::Scedasticity: return "scedasticity";
        case Component::Anomaly: return "anomaly";
    }
    return "?";
}

inline Component parse_component(const std::string& name) {
    for (Component c : kAllComponents) {
        if (component_name(c) == name) {
            return c;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown property '" + name + "'");
}

/// Human-readable interval label for each bin.
inline const std::vector<std::string>& bin_labels(Component c) {
    static const std::array<std::vector<std::string>, kComponents> labels = {{
        {"Stationary", "Non-stationary"},
        {"[0, 0.1]", "(0.1, 0.5]", "(0.5, 0.9]", "(0.9, 1]"},
        {"[0, 0.25]", "(0.25, 0.5]", "(0.5, 0.75]", "(0.75, 1]"},
        {"0", "1", ">=2"},
        {"[0, 0.4]", "(0.4, 0.6]", "(0.6, 0.8]", "> 0.8"},
        {"[0, 0.25]", "(0.25, 0.5]", "(0.5, 0.75]", "(0.75, 1]"},
        {"Homo", "Hetero"},
        {"[0, 0.05]", "(0.05, 0.1]", "(0.1, 0.15]", "> 0.15"},
    }};
    return labels[static_cast<std::size_t>(c)];
}

struct PropertyVector {
    std::array<std::uint8_t, kComponents> c{};

    std::uint8_t operator[](Component k) const { return c[static_cast<std::size_t>(k)]; }
    std::uint8_t& operator[](Component k) { return c[static_cast<std::size_t>(k)]; }

    auto operator<=>(const PropertyVector&) const = default;
    bool operator==(const PropertyVector&) const = default;

    bool valid() const {
        for (std::size_t i = 0; i < kComponents; ++i) {
            if (c[i] >= kComponentBins[i]) {
                return false;
            }
        }
        return true;
    }

    std::string to_string() const {
        std::string out = "(";
        for (std::size_t i = 0; i < kComponents; ++i) {
            out += std::to_string(c[i]);
            out += i + 1 < kComponents ? "," : ")";
        }
        return out;
    }

    std::vector<int> to_ints() const { return {c.begin(), c.end()}; }

    static PropertyVector from_ints(const std::vector<int>& v) {
        if (v.size() != kComponents) {
            throw Error(ErrorCode::Schema, "property vector needs 8 components");
        }
        PropertyVector p;
        for (std::size_t i = 0; i < kComponents; ++i) {
            if (v[i] < 0 || v[i] >= kComponentBins[i]) {
                throw Error(ErrorCode::Schema, "property vector component " + std::to_string(i) + " out of range");
            }
            p.c[i] = static_cast<std::uint8_t>(v[i]);
        }
        return p;
    }
};

inline int l1_distance(const PropertyVector& a, const PropertyVector& b) {
    int d = 0;
    for (std::size_t i = 0; i < kComponents; ++i) {
        d += std::abs(int{a.c[i]} - int{b.c[i]});
    }
    return d;
}

/// Upper-closed intervals: v <= e0 -> 0, v <= e1 -> 1, v <= e2 -> 2, else 3.
/// NaN lands in bin 0.
inline std::uint8_t bin4(double v, double e0, double e1, double e2) {
    if (!(v > e0)) {
        return 0;
    }
    if (v <= e1) {
        return 1;
    }
    return v <= e2 ? 2 : 3;
}

inline PropertyVector bin_profile(const props::PropertyProfile& p) {
    PropertyVector v;
    v[Component::Stationarity] = p.is_stationary ? 0 : 1;
    v[Component::Trend] = bin4(std::abs(p.trend_strength), 0.1, 0.5, 0.9);
    v[Component::SeasonStrength] = bin4(p.season_strength, 0.25, 0.5, 0.75);
    v[Component::SeasonCount] = static_cast<std::uint8_t>(std::min<std::size_t>(p.seasons.size(), 2));
    v[Component::Volatility] = bin4(p.volatility, 0.4, 0.6, 0.8);
    v[Component::Memory] = bin4(p.memory, 0.25, 0.5, 0.75);
    v[Component::Scedasticity] = p.is_heteroscedastic ? 1 : 0;
    v[Component::Anomaly] = bin4(p.anomaly_rate, 0.05, 0.1, 0.15);
    return v;
}

} // namespace aries::store

template <>
struct std::hash<aries::store::PropertyVector> {
    std::size_t operator()(const aries::store::PropertyVector& v) const noexcept {
        std::uint64_t h = 0;
        for (std::uint8_t x : v.c) {
            h = (h << 8) | x;
        }
        return std::hash<std::uint64_t>{}(h);
    }
};
