#pragma once

#include <string>
#include <vector>

namespace lapdog {

// One evaluation over a hypothesis/reference corpus. f1 and rouge_l are
// per-pair means, bleu is corpus-level BLEU-4, guidance is the mean
// per-pair sum of the three metrics (BLEU scaled to [0,1]).
struct MetricBundle {
    double f1 = 0.0;      // [0, 1]
    double bleu = 0.0;    // [0, 100]
    double rouge_l = 0.0; // [0, 1]
    double guidance = 0.0; // [0, 3]

    std::string to_json() const;
};

// Harmonic mean of token-level precision and recall (multiset overlap of
// normalized tokens). 0 if either side is empty or nothing overlaps.
double token_f1(const std::string &hyp, const std::string &ref);

// Sentence-level BLEU-4 in [0, 100]: geometric mean of modified n-gram
// precisions (n = 1..4) times the brevity penalty. With smoothing, an
// order whose match count is zero is floored via add-epsilon
// (m + 0.1) / (t + 0.1), so partial matches never score identically zero.
double sentence_bleu(const std::string &hyp, const std::string &ref, bool smoothing);

// Corpus-level unsmoothed BLEU-4: n-gram statistics pooled over all pairs
// before taking precisions and the brevity penalty.
double corpus_bleu(const std::vector<std::string> &hyps, const std::vector<std::string> &refs);

// LCS-based F-measure over normalized tokens.
double rouge_l(const std::string &hyp, const std::string &ref);

// The summed training objective: token_f1 + smoothed sentence BLEU / 100 +
// rouge_l, each summand in [0, 1].
double guidance_metric(const std::string &hyp, const std::string &ref);

MetricBundle corpus_eval(const std::vector<std::string> &hyps, const std::vector<std::string> &refs);

} // namespace lapdog
