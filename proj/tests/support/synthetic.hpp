#pragma once

// Synthetic corpora for the training and reranking tests. Correctness is
// carried by token substitutions: correct variants swap one base token for a
// benign alias, buggy variants swap one for a fault marker. Bases are large
// enough that every variant of a problem stays within Jaccard 0.9 of the
// others.

#include <cstddef>
#include <string>
#include <vector>

#include "condor/corpus.hpp"
#include "condor/evalrank.hpp"
#include "condor/pairing.hpp"
#include "condor/training.hpp"

namespace condor::testsupport {

inline constexpr std::size_t kBaseTokens = 48;

std::string stem_word(std::size_t index);    // letter-only, single token
std::string benign_word(std::size_t index);  // correctness-preserving alias
std::string marker_word(std::size_t index);  // fault marker

struct ProblemTemplate {
    std::string problem_id;
    std::string problem;
    std::vector<std::string> base;  // distinct stems
};

ProblemTemplate make_problem(Rng& rng, std::size_t index, std::size_t base_tokens = kBaseTokens);

// One substituted variant of the base; correct selects a benign alias,
// buggy a marker.
std::string make_variant(const ProblemTemplate& tmpl, Rng& rng, bool correct);

// `problems` problems, each with correct and error variants plus one distant
// correct sample built on fresh stems (it clears no similarity threshold).
// Verdicts, groups, and orders are laid out so triple mining finds work:
// errors precede corrects in order, groups alternate per slot.
std::vector<CodeSample> make_training_corpus(Rng& rng, std::size_t problems,
                                             std::size_t correct_per_problem,
                                             std::size_t error_per_problem,
                                             bool with_distant = false);

// Directly constructed pairs: per problem, all C-C pairs over the correct
// variants and all E-C pairs of (buggy, correct). Short bases keep per-token
// pooling weights large enough for the contrastive phase to move quickly.
std::vector<ContrastPair> make_separable_pairs(Rng& rng, std::size_t problems,
                                               std::size_t correct_variants = 6,
                                               std::size_t error_variants = 4,
                                               std::size_t base_tokens = 12);

// Candidate sets with exactly one correct candidate among k, all candidates
// mutually within Jaccard 0.9. problem_offset keeps ids disjoint from any
// training corpus built from lower indices.
std::vector<CandidateSet> make_candidate_sets(Rng& rng, std::size_t sets, std::size_t k,
                                              std::size_t problem_offset);

}  // namespace condor::testsupport
