#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace creol2ta::analysis {

// Difference bound matrix over clocks 1..n plus the zero reference clock 0.
// Entry (i,j) bounds x_i - x_j. Bounds are encoded as raw = value*2 + weak,
// weak = 1 for <=, 0 for <; +infinity is a sentinel. Every public operation
// returns a matrix in canonical (all-pairs-shortest-path closed) form, so
// emptiness is visible on the diagonal.

using raw_t = std::int32_t;

constexpr std::int32_t kInfBound = 1 << 28;
constexpr raw_t kRawInf = (kInfBound << 1) | 1;
constexpr raw_t kRawLeZero = 1;  // (0, <=)

inline raw_t make_raw(std::int32_t bound, bool strict) {
    return static_cast<raw_t>((bound << 1) | (strict ? 0 : 1));
}
inline std::int32_t raw_bound(raw_t r) { return r >> 1; }
inline bool raw_strict(raw_t r) { return (r & 1) == 0; }

/// min-plus addition of two raw bounds.
raw_t raw_add(raw_t a, raw_t b);

class Zone {
public:
    Zone() = default;

    /// All clocks exactly zero.
    static Zone zero(int num_clocks);
    /// All valuations with nonnegative clocks.
    static Zone universe(int num_clocks);
    static Zone empty(int num_clocks);

    int num_clocks() const { return dim_ == 0 ? 0 : dim_ - 1; }
    int dim() const { return dim_; }

    bool is_empty() const;

    raw_t at(int i, int j) const { return m_[static_cast<std::size_t>(i) * dim_ + j]; }

    /// Delay closure: removes all upper bounds.
    void up();

    /// Sets clock c to zero.
    void reset(int c);

    /// Intersects with x_i - x_j {<,<=} bound (j = 0 for single-clock atoms).
    /// Returns false if the zone became empty.
    bool constrain(int i, int j, std::int32_t bound, bool strict);

    /// Classic max-constant extrapolation with per-clock ceilings.
    /// max[0] is ignored; max[c] < 0 means the clock is unbounded-irrelevant
    /// (every bound on it is widened away).
    void extrapolate(const std::vector<std::int32_t>& max);

    bool includes(const Zone& other) const;

    bool operator==(const Zone& o) const { return dim_ == o.dim_ && m_ == o.m_; }

    std::size_t hash() const;

    /// Tightest closed form; public for tests.
    void close();

    /// True if already canonical (used by idempotence property tests).
    bool is_canonical() const;

    /// Picks one concrete integer valuation if the zone contains one
    /// (closed zones always do). Returns empty vector when empty.
    std::vector<std::int32_t> sample() const;

    std::string to_string(const std::vector<std::string>* names = nullptr) const;

private:
    void set(int i, int j, raw_t v) { m_[static_cast<std::size_t>(i) * dim_ + j] = v; }
    void close_touched(int touched);

    int dim_ = 0;
    std::vector<raw_t> m_;
};

}  // namespace creol2ta::analysis
