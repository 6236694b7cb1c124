#include "creol2ta/analysis/dbm.hpp"

#include <algorithm>
#include <sstream>

namespace creol2ta::analysis {

raw_t raw_add(raw_t a, raw_t b) {
    if (a >= kRawInf || b >= kRawInf) return kRawInf;
    // value adds; strictness: weak only if both weak.
    return static_cast<raw_t>(((raw_bound(a) + raw_bound(b)) << 1) | (a & b & 1));
}

Zone Zone::zero(int num_clocks) {
    Zone z;
    z.dim_ = num_clocks + 1;
    z.m_.assign(static_cast<std::size_t>(z.dim_) * z.dim_, kRawLeZero);
    return z;
}

Zone Zone::universe(int num_clocks) {
    Zone z;
    z.dim_ = num_clocks + 1;
    z.m_.assign(static_cast<std::size_t>(z.dim_) * z.dim_, kRawInf);
    for (int i = 0; i < z.dim_; ++i) {
        z.set(i, i, kRawLeZero);
        z.set(0, i, kRawLeZero);  // clocks nonnegative
    }
    return z;
}

Zone Zone::empty(int num_clocks) {
    Zone z = zero(num_clocks);
    z.set(0, 0, make_raw(-1, true));
    return z;
}

bool Zone::is_empty() const {
    return dim_ == 0 || at(0, 0) < kRawLeZero;
}

void Zone::up() {
    if (is_empty()) return;
    for (int i = 1; i < dim_; ++i) set(i, 0, kRawInf);
    // Still canonical: for i,j >= 1 entries are unchanged and
    // m[i][0] <= m[i][j] + m[j][0] holds trivially with inf.
}

void Zone::reset(int c) {
    if (is_empty()) return;
    for (int j = 0; j < dim_; ++j) {
        set(c, j, at(0, j));
        set(j, c, at(j, 0));
    }
    set(c, c, kRawLeZero);
}

bool Zone::constrain(int i, int j, std::int32_t bound, bool strict) {
    if (is_empty()) return false;
    raw_t nb = make_raw(bound, strict);
    if (nb >= at(i, j)) return true;  // no tightening
    set(i, j, nb);
    // Check for negative cycle through the tightened edge.
    if (raw_add(at(i, j), at(j, i)) < kRawLeZero) {
        set(0, 0, make_raw(-1, true));
        return false;
    }
    // Re-close incrementally around the changed entry.
    for (int a = 0; a < dim_; ++a) {
        for (int b = 0; b < dim_; ++b) {
            raw_t via = raw_add(at(a, i), raw_add(nb, at(j, b)));
            if (via < at(a, b)) set(a, b, via);
        }
    }
    return !is_empty();
}

void Zone::close() {
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i) {
            raw_t ik = at(i, k);
            if (ik >= kRawInf) continue;
            for (int j = 0; j < dim_; ++j) {
                raw_t via = raw_add(ik, at(k, j));
                if (via < at(i, j)) set(i, j, via);
            }
        }
    for (int i = 0; i < dim_; ++i) {
        if (at(i, i) < kRawLeZero) {
            set(0, 0, make_raw(-1, true));
            return;
        }
    }
}

bool Zone::is_canonical() const {
    if (is_empty()) return true;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                if (raw_add(at(i, k), at(k, j)) < at(i, j)) return false;
    return true;
}

void Zone::extrapolate(const std::vector<std::int32_t>& max) {
    if (is_empty()) return;
    bool changed = false;
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            if (i == j) continue;
            raw_t v = at(i, j);
            if (v >= kRawInf) continue;
            if (i != 0) {
                std::int32_t mi = max[static_cast<std::size_t>(i)];
                if (mi < 0 || raw_bound(v) > mi) {
                    set(i, j, kRawInf);
                    changed = true;
                    continue;
                }
            }
            if (j != 0) {
                std::int32_t mj = max[static_cast<std::size_t>(j)];
                if (mj < 0) {
                    if (i == 0) {
                        set(i, j, kRawLeZero);
                        changed = true;
                    } else {
                        set(i, j, kRawInf);
                        changed = true;
                    }
                    continue;
                }
                if (raw_bound(v) < -mj) {
                    set(i, j, make_raw(-mj, true));
                    changed = true;
                }
            }
        }
    }
    if (changed) close();
}

bool Zone::includes(const Zone& other) const {
    if (other.is_empty()) return true;
    if (is_empty()) return false;
    for (std::size_t k = 0; k < m_.size(); ++k)
        if (m_[k] < other.m_[k]) return false;
    return true;
}

std::size_t Zone::hash() const {
    std::size_t h = 1469598103934665603ull;
    for (raw_t v : m_) {
        h ^= static_cast<std::size_t>(v);
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::int32_t> Zone::sample() const {
    if (is_empty()) return {};
    // Greedy: fix clocks one at a time to the smallest integer allowed by
    // the already fixed ones. Works on canonical closed DBMs with integer
    // bounds.
    std::vector<std::int32_t> val(static_cast<std::size_t>(dim_), 0);
    Zone work = *this;
    for (int c = 1; c < dim_; ++c) {
        // lower bound for x_c: -(bound of (0,c)); strict -> +1
        raw_t lo = work.at(0, c);
        std::int32_t v = -raw_bound(lo) + (raw_strict(lo) ? 1 : 0);
        if (!work.constrain(c, 0, v, false) || !work.constrain(0, c, -v, false)) return {};
        val[static_cast<std::size_t>(c)] = v;
    }
    return val;
}

std::string Zone::to_string(const std::vector<std::string>* names) const {
    if (is_empty()) return "false";
    auto name = [&](int i) -> std::string {
        if (names && i < static_cast<int>(names->size())) return (*names)[static_cast<std::size_t>(i)];
        return i == 0 ? "0" : "x" + std::to_string(i);
    };
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            if (i == j) continue;
            raw_t v = at(i, j);
            if (v >= kRawInf) continue;
            if (i == 0 && v == kRawLeZero) continue;  // x_j >= 0, implicit
            if (!first) os << " && ";
            first = false;
            if (j == 0)
                os << name(i);
            else if (i == 0)
                os << "-" << name(j);
            else
                os << name(i) << "-" << name(j);
            os << (raw_strict(v) ? "<" : "<=") << raw_bound(v);
        }
    }
    if (first) os << "true";
    return os.str();
}

}  // namespace creol2ta::analysis
