#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace dynreg {

/// A comparator sequence: one vector in R^d per round.
using ComparatorSeq = std::vector<std::vector<double>>;
/// A loss sequence: one linear loss g_t in R^d per round.
using LossSeq = std::vector<std::vector<double>>;

/// Vector in R^{dT} viewed as T stacked blocks of dimension d.
/// Block t holds the round-t component; flat index d*t + j is block t,
/// coordinate j (all indices 0-based).
class EmbeddedVector {
public:
    EmbeddedVector() = default;
    EmbeddedVector(std::size_t rounds, std::size_t dim)
        : rounds_(rounds), dim_(dim), data_(rounds * dim, 0.0) {}

    std::size_t rounds() const { return rounds_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }

    std::span<double> block(std::size_t t) {
        return {data_.data() + t * dim_, dim_};
    }
    std::span<const double> block(std::size_t t) const {
        return {data_.data() + t * dim_, dim_};
    }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }

    double dot(const EmbeddedVector& other) const;
    double norm_sq() const;

    void scale(double a);
    void add_scaled(const EmbeddedVector& other, double a);

    /// Text dump, one row per round: header "T d", then T rows of d entries.
    void save(std::ostream& os) const;

private:
    std::size_t rounds_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// The round-t loss placed in block t of an otherwise zero vector in R^{dT}.
/// Throws std::out_of_range if t >= rounds.
EmbeddedVector embed_loss(std::size_t t, std::span<const double> g, std::size_t rounds);

/// Concatenation of a comparator sequence into a single vector in R^{dT}.
/// Throws std::invalid_argument on an empty or ragged sequence.
EmbeddedVector embed_comparator(const ComparatorSeq& seq);

}  // namespace dynreg
