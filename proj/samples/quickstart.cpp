// Profiles a noisy daily-cycle series, bins it, and prints what the
// strategy table suggests for it.

#include "aries/aries.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <random>

int main() {
    using namespace aries;

    Rng rng(42);
    std::normal_distribution<double> noise(0.0, 0.2);
    std::vector<double> x(720);
    for (std::size_t t = 0; t < x.size(); ++t) {
        x[t] = 0.002 * static_cast<double>(t) + std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 24.0) +
               noise(rng);
    }

    const auto p = props::profile(TimeSeries("demo", x));
    std::cout << nlohmann::json(p).dump(2) << '\n';

    const auto key = store::bin_profile(p);
    std::cout << "property vector " << key.to_string() << '\n';

    const auto& map = recommend::default_strategy_map();
    for (store::Component c : store::kAllComponents) {
        for (const auto* rule : map.matching(c, key[c])) {
            std::cout << store::component_name(c) << " / " << rule->granularity << ": adopt "
                      << recommend::join(rule->adopt) << "; avoid " << recommend::join(rule->avoid) << '\n';
        }
    }
}
