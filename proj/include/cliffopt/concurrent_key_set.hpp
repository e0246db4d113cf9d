#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "bits.hpp"

namespace cliffopt {

/// Insert-if-absent hash set of keys, sharded by hash with one mutex per
/// shard. Each shard is an open-addressing table; the all-ones key marks an
/// empty slot and is never a valid key.
class ConcurrentKeySet {
public:
    explicit ConcurrentKeySet(unsigned shard_bits = 6) : shard_bits_(shard_bits), shards_(std::size_t(1) << shard_bits) {
        for (auto& s : shards_) {
            s = std::make_unique<Shard>();
        }
    }

    /// Returns true when the key was not present before.
    bool insert(Key k) {
        const std::uint64_t h = hash_key(k);
        Shard& s = *shards_[h >> (64 - shard_bits_)];
        std::lock_guard<std::mutex> lock(s.mutex);
        if ((s.count + 1) * 2 > s.slots.size()) {
            s.grow();
        }
        return s.insert(k, h);
    }

    bool contains(Key k) const {
        const std::uint64_t h = hash_key(k);
        const Shard& s = *shards_[h >> (64 - shard_bits_)];
        std::lock_guard<std::mutex> lock(s.mutex);
        return s.find(k, h);
    }

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& s : shards_) {
            std::lock_guard<std::mutex> lock(s->mutex);
            n += s->count;
        }
        return n;
    }

    std::size_t memory_bytes() const {
        std::size_t b = 0;
        for (const auto& s : shards_) {
            std::lock_guard<std::mutex> lock(s->mutex);
            b += s->slots.capacity() * sizeof(Key);
        }
        return b;
    }

    /// Moves every key out in ascending order and empties the set.
    std::vector<Key> drain_sorted() {
        std::vector<Key> out;
        out.reserve(size());
        for (auto& s : shards_) {
            std::lock_guard<std::mutex> lock(s->mutex);
            for (Key k : s->slots) {
                if (k != kEmpty) {
                    out.push_back(k);
                }
            }
            s->slots = {};
            s->count = 0;
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static constexpr Key kEmpty = ~Key{0};

    struct Shard {
        mutable std::mutex mutex;
        std::vector<Key> slots;
        std::size_t count = 0;

        bool find(Key k, std::uint64_t h) const {
            if (slots.empty()) {
                return false;
            }
            const std::size_t mask = slots.size() - 1;
            for (std::size_t i = h & mask;; i = (i + 1) & mask) {
                if (slots[i] == k) {
                    return true;
                }
                if (slots[i] == kEmpty) {
                    return false;
                }
            }
        }

        bool insert(Key k, std::uint64_t h) {
            const std::size_t mask = slots.size() - 1;
            for (std::size_t i = h & mask;; i = (i + 1) & mask) {
                if (slots[i] == k) {
                    return false;
                }
                if (slots[i] == kEmpty) {
                    slots[i] = k;
                    ++count;
                    return true;
                }
            }
        }

        void grow() {
            std::vector<Key> old = std::move(slots);
            slots.assign(std::max<std::size_t>(64, old.size() * 2), kEmpty);
            count = 0;
            for (Key k : old) {
                if (k != kEmpty) {
                    insert(k, hash_key(k));
                }
            }
        }
    };

    unsigned shard_bits_;
    std::vector<std::unique_ptr<Shard>> shards_;
};

}  // namespace cliffopt
