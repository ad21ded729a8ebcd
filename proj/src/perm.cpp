#include "latpar/perm.hpp"

#include <algorithm>
#include <numeric>

namespace latpar {

namespace {

void check_order(int n) {
    if (n < 1) throw InvalidArgument("permutation order must be positive");
    if (n > kMaxPermOrder) {
        throw InvalidArgument("permutation order " + std::to_string(n) + " exceeds cap " +
                              std::to_string(kMaxPermOrder));
    }
}

}  // namespace

Permutation Permutation::identity(int n) {
    check_order(n);
    std::vector<uint8_t> img(static_cast<size_t>(n));
    std::iota(img.begin(), img.end(), static_cast<uint8_t>(0));
    Permutation p;
    p.img_ = std::move(img);
    return p;
}

Permutation Permutation::from_images(std::vector<uint8_t> images) {
    const int n = static_cast<int>(images.size());
    check_order(n);
    uint32_t seen = 0;
    for (uint8_t v : images) {
        if (v >= n || (seen & (1u << v))) throw InvalidArgument("images do not form a permutation");
        seen |= 1u << v;
    }
    Permutation p;
    p.img_ = std::move(images);
    return p;
}

Permutation Permutation::from_one_based(const std::vector<int>& images) {
    std::vector<uint8_t> img;
    img.reserve(images.size());
    for (int v : images) {
        if (v < 1 || v > static_cast<int>(images.size())) {
            throw InvalidArgument("one-based image out of range");
        }
        img.push_back(static_cast<uint8_t>(v - 1));
    }
    return from_images(std::move(img));
}

Permutation Permutation::cyclic(int n, long long k) {
    check_order(n);
    long long r = k % n;
    if (r < 0) r += n;
    std::vector<uint8_t> img(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) img[static_cast<size_t>(i)] = static_cast<uint8_t>((i + r) % n);
    Permutation p;
    p.img_ = std::move(img);
    return p;
}

std::vector<int> Permutation::one_based() const {
    std::vector<int> out;
    out.reserve(img_.size());
    for (uint8_t v : img_) out.push_back(v + 1);
    return out;
}

Permutation Permutation::inverse() const {
    std::vector<uint8_t> inv(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) inv[img_[i]] = static_cast<uint8_t>(i);
    Permutation p;
    p.img_ = std::move(inv);
    return p;
}

int parity_sign(const uint8_t* values, int n, int stride) {
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (values[i * stride] > values[j * stride]) ++inversions;
        }
    }
    return (inversions & 1) ? -1 : 1;
}

int Permutation::sign() const { return parity_sign(img_.data(), size(), 1); }

int Permutation::sign_by_cycles() const {
    const int n = size();
    uint32_t visited = 0;
    int transpositions = 0;
    for (int i = 0; i < n; ++i) {
        if (visited & (1u << i)) continue;
        int len = 0;
        int j = i;
        while (!(visited & (1u << j))) {
            visited |= 1u << j;
            j = img_[static_cast<size_t>(j)];
            ++len;
        }
        transpositions += len - 1;
    }
    return (transpositions & 1) ? -1 : 1;
}

uint64_t Permutation::lex_rank() const {
    const int n = size();
    uint64_t rank = 0;
    uint32_t used = 0;
    for (int i = 0; i < n; ++i) {
        const int v = img_[static_cast<size_t>(i)];
        const int smaller = v - __builtin_popcount(used & ((1u << v) - 1u));
        rank += static_cast<uint64_t>(smaller) * factorial(n - 1 - i);
        used |= 1u << v;
    }
    return rank;
}

Permutation Permutation::lex_unrank(uint64_t rank, int n) {
    check_order(n);
    if (rank >= factorial(n)) throw InvalidArgument("rank out of range");
    std::vector<uint8_t> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), static_cast<uint8_t>(0));
    std::vector<uint8_t> img;
    img.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const uint64_t f = factorial(n - 1 - i);
        const size_t idx = static_cast<size_t>(rank / f);
        rank %= f;
        img.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    Permutation p;
    p.img_ = std::move(img);
    return p;
}

bool Permutation::next_lex() { return std::next_permutation(img_.begin(), img_.end()); }

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw InvalidArgument("composing permutations of different order");
    std::vector<uint8_t> img;
    img.reserve(a.images().size());
    for (int i = 0; i < b.size(); ++i) img.push_back(static_cast<uint8_t>(a(b(i))));
    return Permutation::from_images(std::move(img));
}

void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn) {
    Permutation p = Permutation::identity(n);
    do {
        fn(p);
    } while (p.next_lex());
}

uint64_t factorial(int n) {
    if (n < 0 || n > 20) throw InvalidArgument("factorial argument out of range");
    uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<uint64_t>(i);
    return f;
}

}  // namespace latpar
