#include "coarsecyl/fixtures.hpp"

namespace coarsecyl {
namespace fixtures {

FineGraph path_graph(std::size_t n) {
    std::vector<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i));
    for (std::size_t i = 0; i + 1 < n; ++i)
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
    return FineGraph(vs, es);
}

FineGraph cycle_graph(std::size_t n) {
    std::vector<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i));
    for (std::size_t i = 0; i < n; ++i)
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n));
    VertexMap rot(n);
    for (std::size_t i = 0; i < n; ++i)
        rot[i] = static_cast<VertexId>((i + 1) % n);
    return FineGraph(vs, es, {}, {{"r", rot}});
}

FineGraph theta_graph(std::size_t strands, std::size_t strand_len) {
    std::vector<VertexId> vs{0, 1};
    std::vector<std::pair<VertexId, VertexId>> es;
    VertexId next = 2;
    for (std::size_t s = 0; s < strands; ++s) {
        VertexId prev = 0;
        for (std::size_t k = 1; k < strand_len; ++k) {
            vs.push_back(next);
            es.emplace_back(prev, next);
            prev = next++;
        }
        es.emplace_back(prev, 1);
    }
    return FineGraph(vs, es);
}

FineGraph ladder_graph(std::size_t n) {
    std::vector<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < 2 * n; ++i) vs.push_back(static_cast<VertexId>(i));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
        es.emplace_back(static_cast<VertexId>(n + i), static_cast<VertexId>(n + i + 1));
    }
    for (std::size_t i = 0; i < n; ++i)
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(n + i));
    return FineGraph(vs, es);
}

FineGraph binary_tree(std::size_t depth) {
    std::vector<VertexId> vs{0};
    std::vector<std::pair<VertexId, VertexId>> es;
    const std::size_t total = (std::size_t{1} << (depth + 1)) - 1;
    for (VertexId v = 1; v < total; ++v) {
        vs.push_back(v);
        es.emplace_back((v - 1) / 2, v);
    }
    return FineGraph(vs, es);
}

FineGraph spider(std::size_t rays, std::size_t ray_len) {
    std::vector<VertexId> vs{0};
    std::vector<std::pair<VertexId, VertexId>> es;
    VertexId next = 1;
    for (std::size_t r = 0; r < rays; ++r) {
        VertexId prev = 0;
        for (std::size_t k = 0; k < ray_len; ++k) {
            vs.push_back(next);
            es.emplace_back(prev, next);
            prev = next++;
        }
    }
    return FineGraph(vs, es);
}

}  // namespace fixtures
}  // namespace coarsecyl
