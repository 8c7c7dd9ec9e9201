#include "dynreg/embedded.hpp"

#include <ostream>
#include <stdexcept>

#include "dynreg/csvio.hpp"

namespace dynreg {

double EmbeddedVector::dot(const EmbeddedVector& other) const {
    if (other.size() != size())
        throw std::invalid_argument("EmbeddedVector::dot: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) acc += data_[i] * other.data_[i];
    return acc;
}

double EmbeddedVector::norm_sq() const {
    double acc = 0.0;
    for (double x : data_) acc += x * x;
    return acc;
}

void EmbeddedVector::scale(double a) {
    for (double& x : data_) x *= a;
}

void EmbeddedVector::add_scaled(const EmbeddedVector& other, double a) {
    if (other.size() != size())
        throw std::invalid_argument("EmbeddedVector::add_scaled: size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * other.data_[i];
}

void EmbeddedVector::save(std::ostream& os) const {
    os << rounds_ << ' ' << dim_ << '\n';
    for (std::size_t t = 0; t < rounds_; ++t) {
        for (std::size_t j = 0; j < dim_; ++j) {
            if (j) os << ' ';
            os << format_double(data_[t * dim_ + j]);
        }
        os << '\n';
    }
}

EmbeddedVector embed_loss(std::size_t t, std::span<const double> g, std::size_t rounds) {
    if (t >= rounds) throw std::out_of_range("embed_loss: round index out of range");
    EmbeddedVector out(rounds, g.size());
    auto blk = out.block(t);
    for (std::size_t j = 0; j < g.size(); ++j) blk[j] = g[j];
    return out;
}

EmbeddedVector embed_comparator(const ComparatorSeq& seq) {
    if (seq.empty()) throw std::invalid_argument("embed_comparator: empty sequence");
    const std::size_t d = seq.front().size();
    EmbeddedVector out(seq.size(), d);
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (seq[t].size() != d)
            throw std::invalid_argument("embed_comparator: ragged sequence");
        auto blk = out.block(t);
        for (std::size_t j = 0; j < d; ++j) blk[j] = seq[t][j];
    }
    return out;
}

}  // namespace dynreg
