#pragma once

#include "lapdog/rng.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace lapdog {

// One retrievable corpus unit: a five-sentence first-person narrative.
struct Story {
    std::string id;
    std::string title;
    std::vector<std::string> sentences; // exactly 5
    std::string text;                   // sentences joined by a single space

    static Story make(std::string id, std::string title, std::vector<std::string> sentences);
};

class Corpus {
  public:
    void add(Story story);
    std::size_t size() const { return stories_.size(); }
    const Story &at(std::size_t pos) const { return stories_[pos]; }
    const Story &by_id(const std::string &id) const;
    std::size_t position(const std::string &id) const;
    bool contains(const std::string &id) const { return index_.count(id) > 0; }
    const std::vector<Story> &stories() const { return stories_; }

    // Content hash used to tie persisted indexes to the corpus they were
    // built from.
    std::uint64_t fingerprint() const;

  private:
    std::vector<Story> stories_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class Speaker { human, machine };

struct Turn {
    Speaker speaker;
    std::string text;
};

// One training unit: persona sentences, bounded dialogue context, and the
// machine turn to predict.
struct DialogueSample {
    std::string dialogue_id;
    std::vector<std::string> persona;
    std::vector<Turn> context; // starts with a human turn
    std::string target;
};

struct Dialogue {
    std::string id;
    std::vector<std::string> persona;
    std::vector<Turn> turns;
};

// JSON-lines loaders. Malformed records are rejected with the line number;
// invariant violations name the offending record id.
Corpus load_stories(const std::string &path);
std::vector<Dialogue> load_dialogues(const std::string &path);

void save_stories(const Corpus &corpus, const std::string &path);

// --- first-personification -------------------------------------------------

// Token span (within one sentence's token list) tagged as a person name.
struct PersonSpan {
    std::size_t begin;
    std::size_t end; // one past the last token
};

class PersonTagger {
  public:
    virtual ~PersonTagger() = default;
    virtual std::vector<PersonSpan> tag(const std::vector<std::string> &tokens) const = 0;
};

class AgreementCorrector {
  public:
    virtual ~AgreementCorrector() = default;
    // Fixes subject-verb agreement in place after pronoun rewriting.
    virtual void correct(std::vector<std::string> &tokens) const = 0;
};

// Shipped defaults: capitalized-token name detection guarded by a common-word
// list, and a third-person-singular verb table for agreement. Both accept
// extensions from an optional JSON rules file.
class RulePersonTagger : public PersonTagger {
  public:
    RulePersonTagger() = default;
    std::vector<PersonSpan> tag(const std::vector<std::string> &tokens) const override;
    void add_common_word(const std::string &w);
    void add_known_name(const std::string &w);

  private:
    std::vector<std::string> extra_common_;
    std::vector<std::string> known_names_;
};

class RuleAgreementCorrector : public AgreementCorrector {
  public:
    RuleAgreementCorrector() = default;
    void correct(std::vector<std::string> &tokens) const override;
    void add_override(const std::string &third_person, const std::string &first_person);

  private:
    std::unordered_map<std::string, std::string> overrides_;
};

class IdentityCorrector : public AgreementCorrector {
  public:
    void correct(std::vector<std::string> &) const override {}
};

struct PersonifyResult {
    Story story;
    std::size_t replaced_entities = 0;
};

// Rewrites person names and the pronouns referring to them into first
// person, then runs the corrector. Stories without person entities pass
// through unchanged. Sentence count is preserved.
PersonifyResult first_personify(const Story &raw_story, const PersonTagger &tagger,
                                const AgreementCorrector &corrector);

// --- dialogue slicing --------------------------------------------------------

// One sample per machine turn; context is truncated to the most recent
// max_turns human-machine exchanges (the trailing human turn counts as the
// start of the exchange the target completes).
std::vector<DialogueSample> build_samples(const std::vector<Dialogue> &dialogues,
                                          std::size_t max_turns);
std::vector<DialogueSample> build_samples(const std::string &dialogue_file,
                                          std::size_t max_turns);

// Context window used by build_samples, exposed for direct testing.
std::vector<Turn> truncate_context(const std::vector<Turn> &preceding, std::size_t max_turns);

enum class QueryMode { persona, persona_dialogue, generated, one_persona };

QueryMode parse_query_mode(const std::string &name);
std::string query_mode_name(QueryMode mode);

std::string make_query(const DialogueSample &sample, QueryMode mode, Rng &rng,
                       const std::string &draft = "");

} // namespace lapdog
