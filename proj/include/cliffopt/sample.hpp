#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "database.hpp"
#include "gf2.hpp"
#include "synth.hpp"
#include "tableau.hpp"

namespace cliffopt {

/// Uniformly random element of Sp(2n, 2): a random symplectic basis built
/// pair by pair. Each new vector is drawn uniformly from the symplectic
/// complement of the earlier pairs by projecting a uniform vector.
template <typename T = Tableau>
T random_clifford(std::size_t n, std::mt19937_64& rng) {
    if (n == 0) {
        throw std::invalid_argument("random_clifford: n must be at least 1");
    }
    std::vector<BitRow> us;
    std::vector<BitRow> ws;
    auto draw = [&] {
        BitRow v(2 * n);
        for (std::size_t block = 0; block < v.num_blocks(); ++block) {
            const std::uint64_t word = rng();
            for (std::size_t b = 0; b < 64 && 64 * block + b < 2 * n; ++b) {
                v[64 * block + b] = (word >> b) & 1u;
            }
        }
        for (std::size_t j = 0; j < us.size(); ++j) {
            const bool with_w = symplectic_product(v, ws[j]);
            const bool with_u = symplectic_product(v, us[j]);
            if (with_w) {
                v ^= us[j];
            }
            if (with_u) {
                v ^= ws[j];
            }
        }
        return v;
    };
    for (std::size_t i = 0; i < n; ++i) {
        BitRow u;
        do {
            u = draw();
        } while (u.none());
        BitRow w;
        do {
            w = draw();
        } while (!symplectic_product(u, w));
        us.push_back(std::move(u));
        ws.push_back(std::move(w));
    }
    T t = T::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 2 * n; ++j) {
            t.set_bit(i, j, us[i][j]);
            t.set_bit(n + i, j, ws[i][j]);
        }
    }
    return t;
}

template <typename T = Tableau>
T random_clifford(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_clifford<T>(n, rng);
}

/// Half-width of a two-sided Hoeffding interval for a proportion.
inline double hoeffding_epsilon(std::uint64_t samples, double alpha) {
    if (samples == 0 || !(alpha > 0 && alpha < 1)) {
        throw std::invalid_argument("hoeffding_epsilon: need samples > 0 and 0 < alpha < 1");
    }
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(samples)));
}

struct DistributionEstimate {
    std::map<unsigned, std::uint64_t> counts;  ///< optimal cost -> samples
    std::uint64_t samples = 0;
    std::uint64_t not_found = 0;
    double alpha = 0.001;
    double epsilon = 0;

    double proportion(unsigned cost) const {
        auto it = counts.find(cost);
        return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples);
    }
    double not_found_mass() const { return static_cast<double>(not_found) / static_cast<double>(samples); }
};

struct SampleOptions {
    bool use_mim = true;
    double alpha = 0.001;
    unsigned threads = 1;
    std::size_t block = 1024;  ///< samples per seed stream; fixes the output for any thread count
};

/// Stream for block b of a run: seeded from (seed, b) so workers never share state.
inline std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

/// Histogram of optimal costs over uniformly random Cliffords.
inline DistributionEstimate estimate_distribution(const LayerDatabase<CliffordDomain>& db, std::uint64_t samples,
                                                  std::uint64_t seed, const SampleOptions& opt = {}) {
    if (samples == 0 || opt.block == 0) {
        throw std::invalid_argument("estimate_distribution: samples and block size must be positive");
    }
    const std::size_t n = db.num_qubits();
    const std::size_t blocks = (samples + opt.block - 1) / opt.block;
    std::vector<std::map<unsigned, std::uint64_t>> per_block(blocks);
    std::vector<std::uint64_t> missing(blocks, 0);
    detail::parallel_for(blocks, resolve_threads(opt.threads), [&](std::size_t b, unsigned) {
        auto rng = block_rng(seed, b);
        const std::uint64_t count = std::min<std::uint64_t>(opt.block, samples - b * opt.block);
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto t = random_clifford<SmallTableau>(n, rng);
            if (auto c = optimal_cost(db, t, opt.use_mim)) {
                ++per_block[b][*c];
            } else {
                ++missing[b];
            }
        }
    });
    DistributionEstimate est;
    est.samples = samples;
    est.alpha = opt.alpha;
    est.epsilon = hoeffding_epsilon(samples, opt.alpha);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (const auto& [c, k] : per_block[b]) {
            est.counts[c] += k;
        }
        est.not_found += missing[b];
    }
    return est;
}

/// Exact cost distribution of a complete database: class sizes over the group order.
template <typename Domain>
std::map<unsigned, double> exact_distribution(const LayerDatabase<Domain>& db) {
    if (!db.exhaustive()) {
        throw std::invalid_argument("exact_distribution: database is not complete");
    }
    std::map<unsigned, double> out;
    const double total = static_cast<double>(Domain::group_order(db.num_qubits()));
    for (const auto& layer : db.layers()) {
        out[layer.cost()] = static_cast<double>(db.orbit_weighted_count(layer)) / total;
    }
    return out;
}

}  // namespace cliffopt
