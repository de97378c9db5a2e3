#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "vigil/prefix.hpp"

namespace vigil {

/// Binary radix trie keyed by prefix bits, one node per bit. Supports exact
/// insert/find and longest-prefix-match lookup. Single writer, multiple
/// readers; callers serialize writes.
template <typename V>
class PrefixTrie {
public:
    struct Match {
        IpPrefix prefix;
        const V* value;
    };

    /// Insert or overwrite the value stored at `key`.
    void insert(const IpPrefix& key, V value) {
        Node* node = &root_;
        for (unsigned depth = 0; depth < key.length; ++depth) {
            auto& child = node->child[bit_at(key.base, depth)];
            if (!child) child = std::make_unique<Node>();
            node = child.get();
        }
        if (!node->value) ++size_;
        node->value = std::move(value);
    }

    const V* find_exact(const IpPrefix& key) const {
        const Node* node = &root_;
        for (unsigned depth = 0; depth < key.length; ++depth) {
            node = node->child[bit_at(key.base, depth)].get();
            if (!node) return nullptr;
        }
        return node->value ? &*node->value : nullptr;
    }

    V* find_exact(const IpPrefix& key) {
        return const_cast<V*>(std::as_const(*this).find_exact(key));
    }

    /// Longest stored prefix that covers `p`, with its value; nullopt when no
    /// stored prefix covers p.
    std::optional<Match> longest_match(const IpPrefix& p) const {
        std::optional<Match> best;
        const Node* node = &root_;
        unsigned depth = 0;
        while (true) {
            if (node->value)
                best = Match{IpPrefix{p.base & prefix_mask(depth),
                                      static_cast<uint8_t>(depth)},
                             &*node->value};
            if (depth == p.length) break;
            node = node->child[bit_at(p.base, depth)].get();
            if (!node) break;
            ++depth;
        }
        return best;
    }

    /// Visit every stored (prefix, value) pair, shorter prefixes first within
    /// a branch, 0-side before 1-side.
    void for_each(const std::function<void(const IpPrefix&, const V&)>& fn) const {
        walk(&root_, 0, 0, fn);
    }

    size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

private:
    struct Node {
        std::unique_ptr<Node> child[2];
        std::optional<V> value;
    };

    static unsigned bit_at(uint32_t addr, unsigned depth) {
        return (addr >> (31u - depth)) & 1u;
    }

    static void walk(const Node* node, uint32_t base, unsigned depth,
                     const std::function<void(const IpPrefix&, const V&)>& fn) {
        if (node->value)
            fn(IpPrefix{base, static_cast<uint8_t>(depth)}, *node->value);
        if (node->child[0]) walk(node->child[0].get(), base, depth + 1, fn);
        if (node->child[1])
            walk(node->child[1].get(), base | (1u << (31u - depth)), depth + 1, fn);
    }

    Node root_;
    size_t size_ = 0;
};

}  // namespace vigil
