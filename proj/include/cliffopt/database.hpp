#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bits.hpp"
#include "canonical.hpp"
#include "concurrent_key_set.hpp"
#include "cost_model.hpp"
#include "moves.hpp"

namespace cliffopt {

/// Sorted, deduplicated keys of one cost, packed little-endian at a fixed width.
class Layer {
public:
    Layer() = default;

    Layer(unsigned cost, std::size_t key_bytes, const std::vector<Key>& sorted_keys)
        : cost_(cost), width_(key_bytes), count_(sorted_keys.size()) {
        raw_.resize(count_ * width_);
        for (std::size_t i = 0; i < count_; ++i) {
            store_key(sorted_keys[i], std::span<std::uint8_t>(raw_.data() + i * width_, width_));
        }
    }

    /// Adopts already-packed records; they must be strictly ascending.
    Layer(unsigned cost, std::size_t key_bytes, std::vector<std::uint8_t> raw)
        : cost_(cost), width_(key_bytes), raw_(std::move(raw)) {
        if (width_ == 0 || raw_.size() % width_ != 0) {
            throw std::invalid_argument("layer: record size mismatch");
        }
        count_ = raw_.size() / width_;
        for (std::size_t i = 1; i < count_; ++i) {
            if (!((*this)[i - 1] < (*this)[i])) {
                throw std::invalid_argument("layer: keys not strictly sorted");
            }
        }
    }

    unsigned cost() const { return cost_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    std::size_t key_bytes() const { return width_; }
    const std::vector<std::uint8_t>& raw() const { return raw_; }
    std::size_t memory_bytes() const { return raw_.capacity(); }
    bool released() const { return released_; }

    Key operator[](std::size_t i) const { return load_key(raw_.data() + i * width_, width_); }

    bool contains(Key k) const {
        if (released_) {
            throw std::logic_error("layer " + std::to_string(cost_) + " was released during the build");
        }
        std::size_t lo = 0;
        std::size_t hi = count_;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const Key v = (*this)[mid];
            if (v == k) {
                return true;
            }
            if (v < k) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return false;
    }

    /// Drops the key storage but keeps the count; used for two-layer retention.
    void release() {
        raw_ = {};
        released_ = true;
    }

private:
    unsigned cost_ = 0;
    std::size_t width_ = 1;
    std::size_t count_ = 0;
    std::vector<std::uint8_t> raw_;
    bool released_ = false;
};

enum class BuildStatus {
    Complete,     ///< every class was found (the next layer came out empty)
    CostLimit,    ///< stopped at the requested maximum cost
    MemoryLimit,  ///< stopped before the next layer would exceed the budget
};

inline std::string to_string(BuildStatus s) {
    switch (s) {
        case BuildStatus::Complete: return "complete";
        case BuildStatus::CostLimit: return "cost-limit";
        case BuildStatus::MemoryLimit: return "memory-limit";
    }
    return "?";
}

template <typename Domain>
class LayerDatabase;

struct BuildOptions {
    std::optional<unsigned> max_cost;
    std::optional<std::size_t> memory_budget;  ///< bytes of retained layers plus the working set
    unsigned threads = 0;                      ///< 0 = hardware concurrency
    bool retain_all = true;                    ///< false keeps only the two newest layers
    std::function<void(const Layer&)> on_layer;
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

/// Runs body(i) for i in [0, count) on `threads` workers pulling chunks from a shared counter.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    constexpr std::size_t chunk = 256;
    if (threads <= 1 || count <= chunk) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i, 0u);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned id) {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= count) {
                return;
            }
            const std::size_t end = std::min(count, begin + chunk);
            for (std::size_t i = begin; i < end; ++i) {
                body(i, id);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker, t);
    }
    worker(0);
    for (auto& th : pool) {
        th.join();
    }
}

}  // namespace detail

/// Layered table of canonical classes: layer k holds every class of optimal cost k.
template <typename Domain>
class LayerDatabase {
public:
    using element_type = typename Domain::element_type;

    LayerDatabase(std::size_t n, EquivMode mode, CostModel model)
        : n_(n), mode_(mode), model_(std::move(model)), moves_(make_moves<Domain>(n, model_)) {
        if (n == 0 || n > Domain::max_key_qubits) {
            throw std::invalid_argument("database: unsupported qubit count " + std::to_string(n));
        }
    }

    std::size_t num_qubits() const { return n_; }
    EquivMode mode() const { return mode_; }
    const CostModel& model() const { return model_; }
    const std::vector<Move>& moves() const { return moves_; }
    const std::vector<Layer>& layers() const { return layers_; }
    std::size_t key_bytes() const { return key_bytes_for_bits(Domain::key_bits(n_)); }

    /// Highest cost stored; the database is complete through this cost.
    unsigned max_cost() const {
        if (layers_.empty()) {
            throw std::logic_error("database has no layers");
        }
        return static_cast<unsigned>(layers_.size() - 1);
    }

    /// True once the search has shown no class costs more than max_cost().
    bool exhaustive() const { return exhaustive_; }
    void set_exhaustive(bool v) { exhaustive_ = v; }

    void add_layer(Layer layer) {
        if (layer.cost() != layers_.size()) {
            throw std::invalid_argument("database: layers must be added in cost order");
        }
        if (layer.key_bytes() != key_bytes()) {
            throw std::invalid_argument("database: key width mismatch");
        }
        layers_.push_back(std::move(layer));
    }

    Key key_of(const element_type& e) const {
        if (e.num_qubits() != n_) {
            throw std::invalid_argument("database lookup: qubit count mismatch");
        }
        return canonical_form<Domain>(e, mode_).key;
    }

    std::optional<unsigned> lookup_key(Key k) const {
        for (const auto& layer : layers_) {
            if (!layer.released() && layer.contains(k)) {
                return layer.cost();
            }
        }
        return std::nullopt;
    }

    /// Optimal cost, or nullopt when it exceeds max_cost().
    std::optional<unsigned> lookup(const element_type& e) const {
        if (std::any_of(layers_.begin(), layers_.end(), [](const Layer& l) { return l.released(); })) {
            throw std::logic_error("database lookup needs every layer retained");
        }
        return lookup_key(key_of(e));
    }

    std::size_t total_classes() const {
        std::size_t s = 0;
        for (const auto& l : layers_) {
            s += l.size();
        }
        return s;
    }

    /// Number of group elements per layer (class count weighted by orbit size).
    std::vector<Key> orbit_weighted_counts(unsigned threads = 0) const {
        std::vector<Key> out;
        for (const auto& layer : layers_) {
            out.push_back(orbit_weighted_count(layer, threads));
        }
        return out;
    }

    Key orbit_weighted_total(unsigned threads = 0) const {
        Key total = 0;
        for (Key c : orbit_weighted_counts(threads)) {
            total += c;
        }
        return total;
    }

    Key orbit_weighted_count(const Layer& layer, unsigned threads = 0) const {
        if (layer.released()) {
            throw std::logic_error("orbit count needs a retained layer");
        }
        const unsigned t = resolve_threads(threads);
        std::vector<Key> partial(t, 0);
        const Key group = group_size<Domain>(n_, mode_);
        detail::parallel_for(layer.size(), t, [&](std::size_t i, unsigned id) {
            const auto e = decode<Domain>(layer[i], n_);
            partial[id] += group / canonical_form<Domain>(e, mode_).stabilizer;
        });
        Key s = 0;
        for (Key p : partial) {
            s += p;
        }
        return s;
    }

    std::size_t memory_bytes() const {
        std::size_t b = 0;
        for (const auto& l : layers_) {
            b += l.memory_bytes();
        }
        return b;
    }

    void release_layer(std::size_t cost) { layers_.at(cost).release(); }

private:
    std::size_t n_;
    EquivMode mode_;
    CostModel model_;
    std::vector<Move> moves_;
    std::vector<Layer> layers_;
    bool exhaustive_ = false;
};

template <typename Domain>
struct BuildResult {
    LayerDatabase<Domain> db;
    BuildStatus status;
};

namespace detail {

/// Expands `frontier` by `moves` with the given weight into `set`, skipping
/// keys in the guard layers, and returns the newly inserted keys.
template <typename Domain>
std::vector<Key> expand(const LayerDatabase<Domain>& db, const std::vector<Key>& frontier,
                        const std::vector<const Move*>& moves, const std::vector<const Layer*>& guards,
                        ConcurrentKeySet& set, unsigned threads) {
    const std::size_t n = db.num_qubits();
    std::vector<std::vector<Key>> fresh(threads);
    parallel_for(frontier.size(), threads, [&](std::size_t i, unsigned id) {
        const auto parent = decode<Domain>(frontier[i], n);
        for (const Move* m : moves) {
            auto child = parent;
            apply_move(child, *m);
            const Key k = canonical_form<Domain>(child, db.mode()).key;
            bool known = false;
            for (const Layer* g : guards) {
                if (g->contains(k)) {
                    known = true;
                    break;
                }
            }
            if (!known && set.insert(k)) {
                fresh[id].push_back(k);
            }
        }
    });
    std::vector<Key> out;
    for (auto& f : fresh) {
        out.insert(out.end(), f.begin(), f.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Closes the set under weight-0 moves (0/1 shortest-path discipline).
template <typename Domain>
void saturate(const LayerDatabase<Domain>& db, std::vector<Key> frontier, const std::vector<const Move*>& zero_moves,
              const std::vector<const Layer*>& guards, ConcurrentKeySet& set, unsigned threads) {
    while (!zero_moves.empty() && !frontier.empty()) {
        frontier = expand(db, frontier, zero_moves, guards, set, threads);
    }
}

}  // namespace detail

/// Layer-by-layer breadth-first enumeration of canonical classes.
template <typename Domain>
BuildResult<Domain> build_database(std::size_t n, EquivMode mode, const CostModel& model,
                                   const BuildOptions& options = {}) {
    LayerDatabase<Domain> db(n, mode, model);
    const unsigned threads = resolve_threads(options.threads);
    std::vector<const Move*> unit_moves;
    std::vector<const Move*> zero_moves;
    for (const auto& m : db.moves()) {
        (m.weight == 0 ? zero_moves : unit_moves).push_back(&m);
    }
    // No moves at all (one wire, CNOT only) leaves the trivial group.
    if (unit_moves.empty() && !zero_moves.empty()) {
        throw std::invalid_argument("database build: cost model has no positive-weight gate");
    }
    auto over_budget = [&](std::size_t working) {
        return options.memory_budget && db.memory_bytes() + working > *options.memory_budget;
    };
    auto finish_layer = [&](std::vector<Key> keys) {
        Layer layer(static_cast<unsigned>(db.layers().size()), db.key_bytes(), keys);
        db.add_layer(std::move(layer));
        if (options.on_layer) {
            options.on_layer(db.layers().back());
        }
        const std::size_t k = db.layers().size() - 1;
        if (!options.retain_all && k >= 2) {
            db.release_layer(k - 2);
        }
    };

    {
        ConcurrentKeySet set;
        const Key root = canonical_form<Domain>(Domain::identity(n), mode).key;
        set.insert(root);
        detail::saturate(db, {root}, zero_moves, {}, set, threads);
        finish_layer(set.drain_sorted());
    }

    for (;;) {
        const unsigned k = static_cast<unsigned>(db.layers().size());
        if (options.max_cost && k > *options.max_cost) {
            return {std::move(db), BuildStatus::CostLimit};
        }
        const Layer& prev = db.layers()[k - 1];
        std::vector<const Layer*> guards{&prev};
        if (k >= 2) {
            guards.push_back(&db.layers()[k - 2]);
        }
        std::vector<Key> parents(prev.size());
        for (std::size_t i = 0; i < prev.size(); ++i) {
            parents[i] = prev[i];
        }
        ConcurrentKeySet set;
        auto fresh = detail::expand(db, parents, unit_moves, guards, set, threads);
        parents = {};
        detail::saturate(db, std::move(fresh), zero_moves, guards, set, threads);
        const std::size_t working = set.memory_bytes() + set.size() * db.key_bytes();
        if (over_budget(working)) {
            return {std::move(db), BuildStatus::MemoryLimit};
        }
        auto keys = set.drain_sorted();
        if (keys.empty()) {
            db.set_exhaustive(true);
            return {std::move(db), BuildStatus::Complete};
        }
        finish_layer(std::move(keys));
    }
}

}  // namespace cliffopt
