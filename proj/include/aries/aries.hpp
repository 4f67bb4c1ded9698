#pragma once

#include "aries/core/error.hpp"
#include "aries/core/io.hpp"
#include "aries/core/parallel.hpp"
#include "aries/core/random.hpp"
#include "aries/core/series.hpp"
#include "aries/core/stats.hpp"

#include "aries/properties/acf.hpp"
#include "aries/properties/arch.hpp"
#include "aries/properties/hurst.hpp"
#include "aries/properties/loess.hpp"
#include "aries/properties/measures.hpp"
#include "aries/properties/mstl.hpp"
#include "aries/properties/profile.hpp"
#include "aries/properties/seasonality.hpp"
#include "aries/properties/stationarity.hpp"
#include "aries/properties/trend.hpp"
#include "aries/properties/unit_root.hpp"

#include "aries/synth/generator.hpp"
#include "aries/synth/kernel.hpp"

#include "aries/store/aggregate.hpp"
#include "aries/store/perf_log.hpp"
#include "aries/store/property_vector.hpp"
#include "aries/store/store.hpp"

#include "aries/recommend/metrics.hpp"
#include "aries/recommend/recommender.hpp"
#include "aries/recommend/report.hpp"
#include "aries/recommend/strategy_map.hpp"

#include "aries/baselines/evaluate.hpp"
#include "aries/baselines/models.hpp"
