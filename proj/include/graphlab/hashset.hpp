#pragma once

#include <cstdint>
#include <vector>

namespace graphlab {

// Open-addressing set of nonzero uint64 keys (linear probing, power-of-two
// capacity). Hot path for edge-membership tests in the switching chain and
// simplicity checks; noticeably faster than std::unordered_set there.
class HashSet64 {
public:
    explicit HashSet64(std::size_t expected = 16) { rehash(capacity_for(expected)); }

    bool contains(std::uint64_t key) const {
        std::size_t i = index_of(key);
        while (slots_[i] != 0) {
            if (slots_[i] == key) return true;
            i = (i + 1) & mask_;
        }
        return false;
    }

    // Returns true if inserted (false if already present).
    bool insert(std::uint64_t key) {
        if ((size_ + tombstones_ + 1) * 10 >= slots_.size() * 7) rehash(slots_.size() * 2);
        std::size_t i = index_of(key);
        std::size_t first_tomb = SIZE_MAX;
        while (slots_[i] != 0) {
            if (slots_[i] == key) return false;
            if (slots_[i] == kTombstone && first_tomb == SIZE_MAX) first_tomb = i;
            i = (i + 1) & mask_;
        }
        if (first_tomb != SIZE_MAX) {
            i = first_tomb;
            --tombstones_;
        }
        slots_[i] = key;
        ++size_;
        return true;
    }

    // Returns true if the key was present.
    bool erase(std::uint64_t key) {
        std::size_t i = index_of(key);
        while (slots_[i] != 0) {
            if (slots_[i] == key) {
                slots_[i] = kTombstone;
                --size_;
                ++tombstones_;
                return true;
            }
            i = (i + 1) & mask_;
        }
        return false;
    }

    std::size_t size() const { return size_; }

    void clear() {
        std::fill(slots_.begin(), slots_.end(), 0);
        size_ = 0;
        tombstones_ = 0;
    }

private:
    // Reserved: never insert 0 or kTombstone as keys. Edge keys below are
    // built with +1 offsets so 0 cannot occur.
    static constexpr std::uint64_t kTombstone = ~0ULL;

    static std::size_t capacity_for(std::size_t expected) {
        std::size_t cap = 16;
        while (cap * 7 < expected * 10) cap *= 2;
        return cap;
    }

    std::size_t index_of(std::uint64_t key) const {
        std::uint64_t h = key * 0x9E3779B97F4A7C15ULL;
        h ^= h >> 29;
        return static_cast<std::size_t>(h) & mask_;
    }

    void rehash(std::size_t new_cap) {
        std::vector<std::uint64_t> old;
        old.swap(slots_);
        slots_.assign(new_cap, 0);
        mask_ = new_cap - 1;
        size_ = 0;
        tombstones_ = 0;
        for (std::uint64_t k : old)
            if (k != 0 && k != kTombstone) insert(k);
    }

    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
    std::size_t tombstones_ = 0;
};

// Canonical key for an undirected edge; +1 keeps the key nonzero.
inline std::uint64_t edge_key(std::uint32_t u, std::uint32_t v) {
    if (u > v) std::swap(u, v);
    return ((static_cast<std::uint64_t>(u) + 1) << 32) | (static_cast<std::uint64_t>(v) + 1);
}

} // namespace graphlab
