#include "lapdog/metrics.hpp"

#include "lapdog/error.hpp"
#include "lapdog/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

namespace lapdog {

namespace {

constexpr int kMaxOrder = 4;
constexpr double kSmoothEps = 0.1;

using Tokens = std::vector<std::string>;

// n-gram key: tokens joined with a separator that normalize() never emits.
std::string ngram_key(const Tokens &toks, std::size_t start, int n) {
    std::string key;
    for (int i = 0; i < n; ++i) {
        if (i > 0)
            key.push_back('\x1f');
        key += toks[start + static_cast<std::size_t>(i)];
    }
    return key;
}

std::unordered_map<std::string, int> ngram_counts(const Tokens &toks, int n) {
    std::unordered_map<std::string, int> counts;
    if (toks.size() < static_cast<std::size_t>(n))
        return counts;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i)
        ++counts[ngram_key(toks, i, n)];
    return counts;
}

struct BleuStats {
    std::array<long long, kMaxOrder> matches{};
    std::array<long long, kMaxOrder> totals{};
    long long hyp_len = 0;
    long long ref_len = 0;

    void accumulate(const Tokens &hyp, const Tokens &ref) {
        hyp_len += static_cast<long long>(hyp.size());
        ref_len += static_cast<long long>(ref.size());
        for (int n = 1; n <= kMaxOrder; ++n) {
            auto hyp_counts = ngram_counts(hyp, n);
            auto ref_counts = ngram_counts(ref, n);
            for (const auto &[key, count] : hyp_counts) {
                totals[static_cast<std::size_t>(n - 1)] += count;
                auto it = ref_counts.find(key);
                if (it != ref_counts.end())
                    matches[static_cast<std::size_t>(n - 1)] +=
                        std::min(count, it->second);
            }
        }
    }

    double score(bool smoothing) const {
        if (hyp_len == 0)
            return 0.0;
        double log_prec_sum = 0.0;
        for (int n = 0; n < kMaxOrder; ++n) {
            auto i = static_cast<std::size_t>(n);
            double m = static_cast<double>(matches[i]);
            double t = static_cast<double>(totals[i]);
            double p;
            if (matches[i] > 0) {
                p = m / t;
            } else if (smoothing) {
                p = kSmoothEps / (t + kSmoothEps);
            } else {
                return 0.0;
            }
            log_prec_sum += std::log(p);
        }
        double bp = 1.0;
        if (hyp_len < ref_len)
            bp = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
        return 100.0 * bp * std::exp(log_prec_sum / kMaxOrder);
    }
};

std::size_t lcs_length(const Tokens &a, const Tokens &b) {
    if (a.empty() || b.empty())
        return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double f_measure(double overlap, double hyp_size, double ref_size) {
    if (overlap <= 0.0 || hyp_size <= 0.0 || ref_size <= 0.0)
        return 0.0;
    double p = overlap / hyp_size;
    double r = overlap / ref_size;
    return 2.0 * p * r / (p + r);
}

} // namespace

double token_f1(const std::string &hyp, const std::string &ref) {
    Tokens h = normalize(hyp);
    Tokens r = normalize(ref);
    std::unordered_map<std::string, int> ref_counts;
    for (const auto &tok : r)
        ++ref_counts[tok];
    long long overlap = 0;
    for (const auto &tok : h) {
        auto it = ref_counts.find(tok);
        if (it != ref_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    return f_measure(static_cast<double>(overlap), static_cast<double>(h.size()),
                     static_cast<double>(r.size()));
}

double sentence_bleu(const std::string &hyp, const std::string &ref, bool smoothing) {
    BleuStats stats;
    stats.accumulate(normalize(hyp), normalize(ref));
    return stats.score(smoothing);
}

double corpus_bleu(const std::vector<std::string> &hyps, const std::vector<std::string> &refs) {
    require(hyps.size() == refs.size(), "corpus_bleu: length mismatch (", hyps.size(), " vs ",
            refs.size(), ")");
    require(!hyps.empty(), "corpus_bleu: empty corpus");
    BleuStats stats;
    for (std::size_t i = 0; i < hyps.size(); ++i)
        stats.accumulate(normalize(hyps[i]), normalize(refs[i]));
    return stats.score(false);
}

double rouge_l(const std::string &hyp, const std::string &ref) {
    Tokens h = normalize(hyp);
    Tokens r = normalize(ref);
    double lcs = static_cast<double>(lcs_length(h, r));
    return f_measure(lcs, static_cast<double>(h.size()), static_cast<double>(r.size()));
}

double guidance_metric(const std::string &hyp, const std::string &ref) {
    return token_f1(hyp, ref) + sentence_bleu(hyp, ref, true) / 100.0 + rouge_l(hyp, ref);
}

MetricBundle corpus_eval(const std::vector<std::string> &hyps,
                         const std::vector<std::string> &refs) {
    require(hyps.size() == refs.size(), "corpus_eval: length mismatch (", hyps.size(), " vs ",
            refs.size(), ")");
    require(!hyps.empty(), "corpus_eval: empty corpus");
    MetricBundle bundle;
    double n = static_cast<double>(hyps.size());
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        bundle.f1 += token_f1(hyps[i], refs[i]);
        bundle.rouge_l += rouge_l(hyps[i], refs[i]);
        bundle.guidance += guidance_metric(hyps[i], refs[i]);
    }
    bundle.f1 /= n;
    bundle.rouge_l /= n;
    bundle.guidance /= n;
    bundle.bleu = corpus_bleu(hyps, refs);
    return bundle;
}

std::string MetricBundle::to_json() const {
    nlohmann::json j;
    j["f1"] = f1;
    j["bleu"] = bleu;
    j["rouge_l"] = rouge_l;
    j["guidance"] = guidance;
    return j.dump();
}

} // namespace lapdog
