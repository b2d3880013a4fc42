#include "amtopo/snf_engine.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace amtopo {

struct SnfEngine::Candidate
{
    Integer min_abs;
    std::size_t count;
    Index col;
    unsigned version;
};

namespace {

struct CandidateOrder
{
    template <class C>
    bool operator()(const C& a, const C& b) const
    {
        // priority_queue pops the largest; invert to pop the smallest key.
        if (a.min_abs != b.min_abs) {
            return a.min_abs > b.min_abs;
        }
        if (a.count != b.count) {
            return a.count > b.count;
        }
        return a.col > b.col;
    }
};

}  // namespace

SnfEngine::SnfEngine(Index rows, Index cols)
    : rows_(rows),
      cols_(static_cast<std::size_t>(cols)),
      row_support_(static_cast<std::size_t>(rows)),
      row_count_(static_cast<std::size_t>(rows), 0),
      row_active_(static_cast<std::size_t>(rows), 1),
      col_active_(static_cast<std::size_t>(cols), 1),
      col_version_(static_cast<std::size_t>(cols), 0)
{
    if (rows < 0 || cols < 0) {
        throw std::invalid_argument("SnfEngine: negative dimension");
    }
}

void SnfEngine::set_column(Index c, SparseVector v)
{
    auto& col = cols_.at(static_cast<std::size_t>(c));
    for (const auto& [r, x] : col) {
        --row_count_[static_cast<std::size_t>(r)];
    }
    for (const auto& [r, x] : v) {
        if (r < 0 || r >= rows_) {
            throw std::out_of_range("SnfEngine: row index out of range");
        }
        row_support_[static_cast<std::size_t>(r)].push_back(c);
        ++row_count_[static_cast<std::size_t>(r)];
    }
    col = std::move(v);
}

Integer SnfEngine::min_abs(Index c) const
{
    const auto& col = cols_[static_cast<std::size_t>(c)];
    Integer best = -1;
    for (const auto& [r, x] : col) {
        Integer a = abs(x);
        if (best < 0 || a < best) {
            best = std::move(a);
            if (best == 1) {
                break;
            }
        }
    }
    return best;
}

std::vector<Index> SnfEngine::live_row(Index r)
{
    auto& support = row_support_[static_cast<std::size_t>(r)];
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    std::vector<Index> live;
    live.reserve(support.size());
    for (Index c : support) {
        if (cols_[static_cast<std::size_t>(c)].contains(r)) {
            live.push_back(c);
        }
    }
    support = live;
    return live;
}

void SnfEngine::col_add(Index dst, Index src, const Integer& k, SnfListener* listener)
{
    auto& d = cols_[static_cast<std::size_t>(dst)];
    const auto& s = cols_[static_cast<std::size_t>(src)];
    std::vector<std::pair<Index, bool>> before;
    before.reserve(s.size());
    for (const auto& [r, x] : s) {
        before.emplace_back(r, d.contains(r));
    }
    d.axpy(k, s);
    for (const auto& [r, had] : before) {
        bool has = d.contains(r);
        if (has && !had) {
            row_support_[static_cast<std::size_t>(r)].push_back(dst);
            ++row_count_[static_cast<std::size_t>(r)];
        } else if (!has && had) {
            --row_count_[static_cast<std::size_t>(r)];
        }
    }
    dirty_.push_back(dst);
    if (listener) {
        listener->col_axpy(dst, src, k);
    }
}

void SnfEngine::row_add_single(Index dst, Index src, Index col, const Integer& k, SnfListener* listener)
{
    auto& c = cols_[static_cast<std::size_t>(col)];
    Integer v = c.get(dst) + k * c.get(src);
    bool had = c.contains(dst);
    c.set(dst, v);
    if (had && v == 0) {
        --row_count_[static_cast<std::size_t>(dst)];
    } else if (!had && v != 0) {
        row_support_[static_cast<std::size_t>(dst)].push_back(col);
        ++row_count_[static_cast<std::size_t>(dst)];
    }
    dirty_.push_back(col);
    if (listener) {
        listener->row_axpy(dst, src, k);
    }
}

std::vector<Pivot> SnfEngine::diagonalize(SnfListener* listener)
{
    std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> queue;
    auto push = [&](Index c) {
        const auto& col = cols_[static_cast<std::size_t>(c)];
        if (!col_active_[static_cast<std::size_t>(c)] || col.empty()) {
            return;
        }
        ++col_version_[static_cast<std::size_t>(c)];
        queue.push(Candidate{min_abs(c), col.size(), c, col_version_[static_cast<std::size_t>(c)]});
    };
    for (Index c = 0; c < cols(); ++c) {
        push(c);
    }

    std::vector<Pivot> pivots;
    while (!queue.empty()) {
        Candidate top = queue.top();
        queue.pop();
        const auto cu = static_cast<std::size_t>(top.col);
        if (!col_active_[cu] || top.version != col_version_[cu] || cols_[cu].empty()) {
            continue;
        }
        Index j = top.col;
        // Pivot row: smallest magnitude, then sparsest row.
        Index i = -1;
        {
            Integer best;
            for (const auto& [r, x] : cols_[cu]) {
                Integer a = abs(x);
                if (i < 0 || a < best ||
                    (a == best && row_count_[static_cast<std::size_t>(r)] <
                                      row_count_[static_cast<std::size_t>(i)])) {
                    best = std::move(a);
                    i = r;
                }
            }
        }

        while (true) {
            Integer p = cols_[static_cast<std::size_t>(j)].get(i);
            // Clear row i with column operations.
            for (Index c : live_row(i)) {
                if (c == j) {
                    continue;
                }
                Integer q = trunc_div(cols_[static_cast<std::size_t>(c)].get(i), p);
                if (q != 0) {
                    col_add(c, j, -q, listener);
                }
            }
            Index next_col = -1;
            {
                Integer best;
                for (Index c : live_row(i)) {
                    if (c == j) {
                        continue;
                    }
                    Integer a = abs(cols_[static_cast<std::size_t>(c)].get(i));
                    if (next_col < 0 || a < best ||
                        (a == best && cols_[static_cast<std::size_t>(c)].size() <
                                          cols_[static_cast<std::size_t>(next_col)].size())) {
                        best = std::move(a);
                        next_col = c;
                    }
                }
            }
            if (next_col >= 0) {
                j = next_col;
                continue;
            }
            // Row i holds only the pivot now; clear column j with row operations.
            std::vector<Index> others;
            for (const auto& [r, x] : cols_[static_cast<std::size_t>(j)]) {
                if (r != i) {
                    others.push_back(r);
                }
            }
            for (Index r : others) {
                Integer q = trunc_div(cols_[static_cast<std::size_t>(j)].get(r), p);
                if (q != 0) {
                    row_add_single(r, i, j, -q, listener);
                }
            }
            Index next_row = -1;
            {
                Integer best;
                for (const auto& [r, x] : cols_[static_cast<std::size_t>(j)]) {
                    if (r == i) {
                        continue;
                    }
                    Integer a = abs(x);
                    if (next_row < 0 || a < best) {
                        best = std::move(a);
                        next_row = r;
                    }
                }
            }
            if (next_row >= 0) {
                i = next_row;
                continue;
            }
            pivots.push_back(Pivot{i, j, p});
            break;
        }
        row_active_[static_cast<std::size_t>(i)] = 0;
        col_active_[static_cast<std::size_t>(j)] = 0;
        std::sort(dirty_.begin(), dirty_.end());
        dirty_.erase(std::unique(dirty_.begin(), dirty_.end()), dirty_.end());
        for (Index c : dirty_) {
            push(c);
        }
        dirty_.clear();
    }
    return pivots;
}

std::vector<Pivot> SnfEngine::reduce(SnfListener* listener)
{
    std::vector<Pivot> pivots = diagonalize(listener);
    for (auto& p : pivots) {
        if (p.value < 0) {
            p.value = -p.value;
            cols_[static_cast<std::size_t>(p.col)].negate();
            if (listener) {
                listener->col_negate(p.col);
            }
        }
    }
    repair_divisibility(pivots, listener);
    return pivots;
}

void repair_divisibility(std::vector<Pivot>& pivots, SnfListener* listener)
{
    std::stable_sort(pivots.begin(), pivots.end(),
                     [](const Pivot& a, const Pivot& b) { return a.value < b.value; });
    auto first = std::find_if(pivots.begin(), pivots.end(), [](const Pivot& p) { return p.value != 1; });
    for (auto a = first; a != pivots.end(); ++a) {
        for (auto b = a + 1; b != pivots.end(); ++b) {
            if (b->value % a->value == 0) {
                continue;
            }
            // diag(x, y) -> diag(gcd, lcm) through
            //   [x 0; 0 y] -> [x y; 0 y] -> [g 0; t*y x*y/g] -> [g 0; 0 x*y/g].
            const Integer x = a->value;
            const Integer y = b->value;
            Integer s, t;
            Integer g = ext_gcd(x, y, s, t);
            if (listener) {
                listener->row_axpy(a->row, b->row, 1);
                listener->col_transform(a->col, b->col, s, -(y / g), t, x / g);
                listener->row_axpy(b->row, a->row, -(t * y / g));
            }
            a->value = g;
            b->value = x * y / g;
        }
    }
    std::stable_sort(pivots.begin(), pivots.end(),
                     [](const Pivot& a, const Pivot& b) { return a.value < b.value; });
}

}  // namespace amtopo
