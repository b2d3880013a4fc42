#include "amtopo/sparse.hpp"

#include <algorithm>

namespace amtopo {

Integer trunc_div(const Integer& a, const Integer& b)
{
    // cpp_int division truncates toward zero.
    return a / b;
}

Integer gcd(const Integer& a, const Integer& b)
{
    Integer x = abs(a);
    Integer y = abs(b);
    while (y != 0) {
        Integer r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x;
}

Integer ext_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t)
{
    Integer old_r = a, r = b;
    Integer old_s = 1, cur_s = 0;
    Integer old_t = 0, cur_t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = std::move(r);
        r = std::move(tmp);
        tmp = old_s - q * cur_s;
        old_s = std::move(cur_s);
        cur_s = std::move(tmp);
        tmp = old_t - q * cur_t;
        old_t = std::move(cur_t);
        cur_t = std::move(tmp);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

std::string to_string(const Integer& v)
{
    return v.str();
}

SparseVector SparseVector::unit(Index i)
{
    SparseVector v;
    v.entries_.emplace_back(i, Integer(1));
    return v;
}

SparseVector SparseVector::from_entries(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    SparseVector v;
    for (auto& [i, x] : entries) {
        if (!v.entries_.empty() && v.entries_.back().first == i) {
            v.entries_.back().second += x;
            if (v.entries_.back().second == 0) {
                v.entries_.pop_back();
            }
        } else if (x != 0) {
            v.entries_.emplace_back(i, std::move(x));
        }
    }
    return v;
}

namespace {

auto lower(const std::vector<SparseVector::Entry>& e, Index i)
{
    return std::lower_bound(e.begin(), e.end(), i,
                            [](const SparseVector::Entry& a, Index k) { return a.first < k; });
}

}  // namespace

const Integer* SparseVector::find(Index i) const
{
    auto it = lower(entries_, i);
    if (it != entries_.end() && it->first == i) {
        return &it->second;
    }
    return nullptr;
}

Integer SparseVector::get(Index i) const
{
    const Integer* p = find(i);
    return p ? *p : Integer(0);
}

bool SparseVector::contains(Index i) const
{
    return find(i) != nullptr;
}

void SparseVector::set(Index i, const Integer& v)
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& a, Index k) { return a.first < k; });
    if (it != entries_.end() && it->first == i) {
        if (v == 0) {
            entries_.erase(it);
        } else {
            it->second = v;
        }
    } else if (v != 0) {
        entries_.insert(it, Entry(i, v));
    }
}

void SparseVector::axpy(const Integer& k, const SparseVector& other)
{
    if (k == 0 || other.entries_.empty()) {
        return;
    }
    // Single-entry updates are common during elimination; avoid the merge.
    if (other.entries_.size() == 1) {
        const auto& [i, x] = other.entries_.front();
        auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                                   [](const Entry& a, Index key) { return a.first < key; });
        if (it != entries_.end() && it->first == i) {
            it->second += k * x;
            if (it->second == 0) {
                entries_.erase(it);
            }
        } else {
            entries_.insert(it, Entry(i, k * x));
        }
        return;
    }
    std::vector<Entry> out;
    out.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
        if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
            out.push_back(std::move(*a));
            ++a;
        } else if (a == entries_.end() || b->first < a->first) {
            out.emplace_back(b->first, k * b->second);
            ++b;
        } else {
            Integer s = a->second + k * b->second;
            if (s != 0) {
                out.emplace_back(a->first, std::move(s));
            }
            ++a;
            ++b;
        }
    }
    entries_ = std::move(out);
}

void SparseVector::negate()
{
    for (auto& e : entries_) {
        e.second = -e.second;
    }
}

void SparseVector::scale(const Integer& k)
{
    if (k == 0) {
        entries_.clear();
        return;
    }
    for (auto& e : entries_) {
        e.second *= k;
    }
}

void SparseVector::remap(const std::vector<Index>& map)
{
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (auto& [i, x] : entries_) {
        Index j = map.at(static_cast<std::size_t>(i));
        if (j >= 0) {
            out.emplace_back(j, std::move(x));
        }
    }
    *this = from_entries(std::move(out));
}

Integer SparseVector::dot(const SparseVector& other) const
{
    Integer s = 0;
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() && b != other.entries_.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            s += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return s;
}

SparseVector operator+(const SparseVector& a, const SparseVector& b)
{
    SparseVector r = a;
    r.axpy(1, b);
    return r;
}

SparseVector operator-(const SparseVector& a, const SparseVector& b)
{
    SparseVector r = a;
    r.axpy(-1, b);
    return r;
}

SparseVector operator*(const Integer& k, const SparseVector& a)
{
    SparseVector r = a;
    r.scale(k);
    return r;
}

}  // namespace amtopo
