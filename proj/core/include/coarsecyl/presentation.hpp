#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarsecyl/graph.hpp"

namespace coarsecyl {

/// A word over the generators: +k is generator k-1, -k its inverse, 0 an
/// explicit identity letter (only produced by padding length-1 relators).
using Word = std::vector<int>;

/// Cancels adjacent inverse pairs; identity letters are kept.
Word free_reduce(Word w);
Word invert(const Word& w);
Word concat(const Word& a, const Word& b);

struct Presentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;                 // freely reduced
    std::vector<std::vector<Word>> peripherals; // generating sets of peripheral subgroups

    bool triangular() const;  // all relators of length <= 3

    /// Text format: "gens: a b; rels: aBAb, abc; peripherals: [a], [b c]"
    /// (capital letter = inverse).
    static Presentation parse(const std::string& text);
    std::string format() const;

    std::string word_to_string(const Word& w) const;
    Word word_from_string(const std::string& s) const;
};

/// Equivalent presentation with all relators of length <= 3, via letter
/// introduction. Length-1 relators are padded with an identity letter;
/// empty relators are dropped (reported in *warnings when given). When
/// `definitions` is given it receives, per new generator in order, the
/// defining word over the alphabet extended so far.
Presentation triangularize(const Presentation& p, std::vector<std::string>* warnings = nullptr,
                           std::vector<Word>* definitions = nullptr);

enum class GroupKind : std::uint8_t {
    free_group,        // no relators: free reduction solves the word problem
    cyclic_product,    // free product of cyclic groups: syllable normal form
    free_abelian,      // commutator relators only: exponent vectors
    finite_enumerated  // coset enumeration produced a full multiplication table
};

/// Canonical forms and word-metric lengths for the supported group classes.
class GroupModel {
public:
    static GroupModel build(const Presentation& p, std::size_t coset_budget = 200000);

    GroupKind kind() const { return kind_; }
    std::size_t generator_count() const { return generator_count_; }

    Word normal_form(const Word& w) const;
    bool is_identity(const Word& w) const { return normal_form(w).empty(); }
    std::int64_t geodesic_length(const Word& w) const;

    /// Group order; only for finite_enumerated models.
    std::size_t order() const;

private:
    GroupKind kind_ = GroupKind::free_group;
    std::size_t generator_count_ = 0;
    std::vector<std::int64_t> orders_;                // cyclic_product: 0 = infinite
    std::vector<std::vector<std::uint32_t>> table_;   // finite: coset x letter
    std::vector<Word> reps_;                          // finite: shortest rep per coset
    std::vector<std::uint32_t> depth_;                // finite: word length per coset

    std::uint32_t trace(const Word& w) const;         // finite: coset of a word
    friend struct GroupModelAccess;
};

struct GraphModel {
    FineGraph graph;
    VertexId basepoint = 0;
    std::uint32_t truncation_radius = 0;
    std::vector<VertexId> boundary;         // sorted; where truncation bites
    std::vector<VertexId> truncated_cones;  // cone vertices of boundary-clipped cosets

    // Group bookkeeping for translation and lamination (not serialized).
    std::shared_ptr<const Presentation> presentation;
    std::shared_ptr<const GroupModel> group;
    std::vector<Word> element_of;           // orbit vertex index -> canonical element
    std::map<VertexId, std::pair<std::size_t, Word>> cone_info;  // cone -> (peripheral, coset rep)

    GraphModel(FineGraph g) : graph(std::move(g)) {}

    bool is_boundary(VertexId v) const {
        return std::binary_search(boundary.begin(), boundary.end(), v);
    }
    /// Orbit vertex carrying a canonical element, if inside the ball.
    std::optional<VertexId> vertex_of(const Word& element) const;
    /// Left translation of any vertex (orbit or cone) by a word; nullopt
    /// when the image leaves the ball.
    std::optional<VertexId> translate(const Word& gamma, VertexId v) const;
};

/// Ball of the Cayley graph up to the given radius, with the partial left
/// action of the generators and the boundary sphere marked.
GraphModel cayley_ball(const Presentation& p, std::uint32_t radius,
                       std::size_t coset_budget = 200000);

/// Adds one parabolic cone vertex per visible peripheral coset, joined to
/// every coset element in the ball. Cosets meeting the boundary are marked
/// truncated.
GraphModel coned_off(const GraphModel& model, const std::vector<std::vector<Word>>& peripherals);

struct WordBoundReport {
    Verdict verdict = Verdict::inconclusive;
    bool infinite_angle = false;   // some geodesic had an unbounded angle (excluded)
    std::int64_t word_length = 0;
    std::int64_t ball_distance = 0;
};

/// Checks |gamma p - p| * (MaxAng([p, gamma p]) + 1) >= |gamma| over every
/// fully interior enumerated geodesic. Boundary interference or purely
/// infinite angles give inconclusive.
WordBoundReport check_word_bound(const GraphModel& model, const Word& gamma,
                                 std::size_t geodesic_cap = 64);

}  // namespace coarsecyl
