#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "tauforge/rational.hpp"

namespace tauforge {

struct Frobenius {
    std::vector<int> alphas;
    std::vector<int> betas;
    int rank() const { return static_cast<int>(alphas.size()); }
    bool operator==(const Frobenius&) const = default;
};

// A Young diagram; zero parts are stripped on construction.
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts);
    explicit Partition(std::vector<int> parts);

    static Partition from_frobenius(const Frobenius& f);
    static Partition hook(int alpha, int beta);  // (alpha+1, 1^beta)
    static Partition rectangle(int rows, int cols);

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int size() const;
    bool empty() const { return parts_.empty(); }
    // 1-indexed row access, zero beyond the length
    int operator[](int i) const { return (i >= 1 && i <= length()) ? parts_[i - 1] : 0; }

    Partition transpose() const;
    Frobenius frobenius() const;
    int durfee() const;
    int b_exponent() const;
    bool contains(const Partition& mu) const;
    bool contains_box(int i, int j) const { return j >= 1 && i >= 1 && (*this)[i] >= j; }

    int hook_length(int i, int j) const;
    Z hook_product() const;
    Q pochhammer_content(const Q& u) const;
    Q pochhammer_frobenius(const Q& u) const;
    // Sum over boxes of the content j-i.
    long content_sum() const;

    std::string str() const;
    auto operator<=>(const Partition&) const = default;

private:
    std::vector<int> parts_;
};

// The occupied set I_{n,lambda} = {n + lambda_i - i : i >= 1}.
class MayaSet {
public:
    MayaSet(int charge, Partition shape) : charge_(charge), shape_(std::move(shape)) {}
    int charge() const { return charge_; }
    const Partition& shape() const { return shape_; }
    bool contains(long k) const;
    // Modes >= floor that are occupied, descending.
    std::vector<long> occupied_from(long floor) const;

private:
    int charge_;
    Partition shape_;
};

// A finite description of an occupied set: every k < sea is occupied except
// `holes`, and the modes in `particles` (all >= sea) are occupied too.
struct MayaDescription {
    long sea = 0;
    std::vector<long> particles;
    std::vector<long> holes;
};

MayaSet maya_set(int n, const Partition& lambda);
std::pair<int, Partition> maya_canonicalize(const MayaDescription& d);
MayaDescription maya_describe(const MayaSet& m);

// Weight first, then parts in decreasing lexicographic order.
std::vector<Partition> enumerate_partitions(int max_weight, std::optional<int> max_rows = {},
                                            std::optional<int> max_cols = {});
std::vector<Partition> partitions_of(int weight, std::optional<int> max_rows = {},
                                     std::optional<int> max_cols = {});

}  // namespace tauforge
