#include "pacgen/streams.hpp"

#include <boost/random/normal_distribution.hpp>

namespace pacgen {

double uniform01(Rng& rng) {
    // 53 high bits -> [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

double standard_normal(Rng& rng) {
    boost::random::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

}  // namespace pacgen
