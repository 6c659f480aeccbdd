#include "tailgate/corpus.hpp"

namespace tailgate::corpus {

namespace {

constexpr std::int64_t kCoordRange = 3;
constexpr std::uint64_t kMaxWeight = 4;

std::size_t between(Stream& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.index(hi - lo + 1));
}

}  // namespace

FiniteDistribution random_lattice_distribution(Stream& rng, std::size_t dim, std::size_t max_support) {
    const std::size_t support = between(rng, 1, max_support);
    std::vector<Vector> points;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t i = 0; i < support; ++i) {
        Vector x(dim);
        for (std::size_t j = 0; j < dim; ++j)
            x.set(j, static_cast<double>(static_cast<std::int64_t>(rng.index(2 * kCoordRange + 1)) - kCoordRange));
        points.push_back(x);
        weights.push_back(static_cast<double>(1 + rng.index(kMaxWeight)));
        total += weights.back();
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < support; ++i) atoms.push_back({points[i], weights[i] / total});
    return FiniteDistribution(std::move(atoms));
}

ComponentFamily random_family(Stream& rng, std::size_t n, std::size_t dim, std::size_t max_support) {
    std::vector<FiniteDistribution> comps;
    for (std::size_t k = 0; k < n; ++k) comps.push_back(random_lattice_distribution(rng, dim, max_support));
    return ComponentFamily(std::move(comps));
}

std::vector<FiniteDistribution> distribution_corpus() {
    Stream rng(SeedSpec{0x4c454d4d41, 1});
    std::vector<FiniteDistribution> out;
    for (std::size_t i = 0; i < 240; ++i) out.push_back(random_lattice_distribution(rng, 1 + i % 3, 6));
    return out;
}

std::vector<ComponentFamily> family_corpus() {
    Stream rng(SeedSpec{0x4c454d4d41, 2});
    std::vector<ComponentFamily> out;
    for (std::size_t i = 0; i < 120; ++i) out.push_back(random_family(rng, between(rng, 1, 4), 1 + i % 2, 3));
    return out;
}

std::vector<ComponentFamily> cover_corpus() {
    Stream rng(SeedSpec{0x434f564552, 1});
    std::vector<ComponentFamily> out;
    for (std::size_t i = 0; i < 100; ++i) out.push_back(random_family(rng, between(rng, 1, 5), 1 + i % 3, 4));
    return out;
}

std::vector<ComponentFamily> theorem_corpus() {
    std::vector<ComponentFamily> out;
    out.push_back(identical_components(
        FiniteDistribution({{Vector{-1.0}, 0.25}, {Vector{0.0}, 0.25}, {Vector{2.0}, 0.5}}), 4));
    out.push_back(converse_family(3));
    Stream rng(SeedSpec{0x5448454f52454d, 1});
    while (out.size() < 50) out.push_back(random_family(rng, between(rng, 1, 6), 1 + out.size() % 2, 3));
    return out;
}

ComponentFamily identical_components(const FiniteDistribution& d, std::size_t n) {
    return ComponentFamily(std::vector<FiniteDistribution>(n, d));
}

ComponentFamily converse_family(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "need n >= 1");
    std::vector<FiniteDistribution> comps{FiniteDistribution::rademacher(1)};
    for (std::size_t i = 1; i < n; ++i) comps.push_back(FiniteDistribution::point_mass(Vector{0.0}));
    return ComponentFamily(std::move(comps));
}

}  // namespace tailgate::corpus
