#include "lapdog/corpus.hpp"

#include "lapdog/error.hpp"
#include "lapdog/fingerprint.hpp"
#include "lapdog/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include <json.hpp>

namespace lapdog {

using nlohmann::json;

Story Story::make(std::string id, std::string title, std::vector<std::string> sentences) {
    require(sentences.size() == 5, "story '", id, "' must have exactly 5 sentences, got ",
            sentences.size());
    Story s;
    s.id = std::move(id);
    s.title = std::move(title);
    s.sentences = std::move(sentences);
    s.text = join(s.sentences, " ");
    return s;
}

void Corpus::add(Story story) {
    require(index_.count(story.id) == 0, "duplicate story id '", story.id, "'");
    index_[story.id] = stories_.size();
    stories_.push_back(std::move(story));
}

const Story &Corpus::by_id(const std::string &id) const {
    return stories_[position(id)];
}

std::size_t Corpus::position(const std::string &id) const {
    auto it = index_.find(id);
    require(it != index_.end(), "unknown story id '", id, "'");
    return it->second;
}

std::uint64_t Corpus::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto &s : stories_) {
        h = fnv1a64(s.id, h);
        h = fnv1a64("\x1f", h);
        h = fnv1a64(s.text, h);
        h = fnv1a64("\x1e", h);
    }
    return h;
}

namespace {

bool blank_line(const std::string &line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

} // namespace

Corpus load_stories(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), "cannot open stories file: ", path);
    Corpus corpus;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_line(line))
            continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception &e) {
            fail("stories file ", path, " line ", lineno, ": malformed JSON: ", e.what());
        }
        if (!rec.is_object() || !rec.contains("id") || !rec.contains("title") ||
            !rec.contains("sentences") || !rec["sentences"].is_array())
            fail("stories file ", path, " line ", lineno,
                 ": record must have id, title and a sentences array");
        std::string id = rec["id"].get<std::string>();
        std::vector<std::string> sentences;
        for (const auto &s : rec["sentences"])
            sentences.push_back(s.get<std::string>());
        if (sentences.size() != 5)
            fail("story '", id, "' (line ", lineno, "): expected 5 sentences, got ",
                 sentences.size());
        corpus.add(Story::make(id, rec["title"].get<std::string>(), std::move(sentences)));
    }
    return corpus;
}

void save_stories(const Corpus &corpus, const std::string &path) {
    std::ofstream out(path, std::ios::trunc);
    require(out.good(), "cannot open for writing: ", path);
    for (const auto &s : corpus.stories()) {
        json rec;
        rec["id"] = s.id;
        rec["title"] = s.title;
        rec["sentences"] = s.sentences;
        out << rec.dump() << "\n";
    }
    require(out.good(), "write failed: ", path);
}

std::vector<Dialogue> load_dialogues(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), "cannot open dialogue file: ", path);
    std::vector<Dialogue> dialogues;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_line(line))
            continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception &e) {
            fail("dialogue file ", path, " line ", lineno, ": malformed JSON: ", e.what());
        }
        if (!rec.is_object() || !rec.contains("id") || !rec.contains("persona") ||
            !rec.contains("turns"))
            fail("dialogue file ", path, " line ", lineno,
                 ": record must have id, persona and turns");
        Dialogue d;
        d.id = rec["id"].get<std::string>();
        for (const auto &p : rec["persona"])
            d.persona.push_back(p.get<std::string>());
        require(!d.persona.empty(), "dialogue '", d.id, "' (line ", lineno, "): empty persona");
        for (const auto &t : rec["turns"]) {
            std::string speaker = t.at("speaker").get<std::string>();
            Turn turn;
            if (speaker == "human")
                turn.speaker = Speaker::human;
            else if (speaker == "machine")
                turn.speaker = Speaker::machine;
            else
                fail("dialogue '", d.id, "' (line ", lineno, "): unknown speaker '", speaker,
                     "'");
            turn.text = t.at("text").get<std::string>();
            d.turns.push_back(std::move(turn));
        }
        dialogues.push_back(std::move(d));
    }
    return dialogues;
}

// --- first-personification ---------------------------------------------------

namespace {

// Case-preserving sentence tokenizer for the rewriting pipeline. Trailing
// punctuation and possessive 's become their own tokens so spans can be
// matched and replaced cleanly.
std::vector<std::string> split_sentence(const std::string &sentence) {
    std::vector<std::string> tokens;
    std::string word;
    auto flush = [&]() {
        if (word.empty())
            return;
        // peel leading quotes
        std::size_t start = 0;
        while (start < word.size() && (word[start] == '"' || word[start] == '\''))
            tokens.push_back(std::string(1, word[start++]));
        std::string core = word.substr(start);
        // peel trailing punctuation
        std::vector<std::string> tail;
        while (!core.empty()) {
            char c = core.back();
            if (c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' ||
                c == '"') {
                tail.push_back(std::string(1, c));
                core.pop_back();
            } else {
                break;
            }
        }
        if (core.size() > 2 && (core.ends_with("'s") || core.ends_with("\xe2\x80\x99s"))) {
            std::size_t cut = core.ends_with("'s") ? 2 : 4;
            tokens.push_back(core.substr(0, core.size() - cut));
            tokens.push_back("'s");
        } else if (!core.empty()) {
            tokens.push_back(core);
        }
        for (auto it = tail.rbegin(); it != tail.rend(); ++it)
            tokens.push_back(*it);
        word.clear();
    };
    for (char c : sentence) {
        if (std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            word.push_back(c);
    }
    flush();
    return tokens;
}

bool attaches_left(const std::string &tok) {
    if (tok == "'s")
        return true;
    return tok.size() == 1 && (tok[0] == '.' || tok[0] == ',' || tok[0] == '!' ||
                               tok[0] == '?' || tok[0] == ';' || tok[0] == ':');
}

std::string detokenize(const std::vector<std::string> &tokens) {
    std::string out;
    for (const auto &tok : tokens) {
        if (!out.empty() && !attaches_left(tok))
            out += " ";
        out += tok;
    }
    return out;
}

const std::set<std::string> &common_words() {
    static const std::set<std::string> words = {
        // determiners, pronouns, question words
        "the", "a", "an", "this", "that", "these", "those", "some", "any", "no", "every",
        "each", "all", "both", "few", "many", "much", "most", "other", "another", "such",
        "i", "he", "she", "it", "we", "they", "you", "me", "him", "her", "us", "them", "my",
        "your", "his", "its", "our", "their", "mine", "yours", "hers", "ours", "theirs",
        "myself", "yourself", "himself", "herself", "itself", "ourselves", "themselves",
        "who", "whom", "whose", "which", "what", "someone", "something", "anyone",
        "anything", "everyone", "everything", "nobody", "nothing", "people",
        // auxiliaries and very common verbs
        "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "do",
        "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might",
        "must", "get", "got", "go", "goes", "went", "come", "came", "make", "made", "take",
        "took", "see", "saw", "know", "knew", "think", "thought", "want", "wanted", "like",
        "liked", "love", "loved", "feel", "felt", "try", "tried", "work", "worked", "play",
        "played", "live", "lived",
        // prepositions and conjunctions
        "and", "or", "but", "if", "because", "as", "until", "while", "of", "at", "by",
        "for", "with", "about", "against", "between", "into", "through", "during",
        "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on",
        "off", "over", "under", "again", "further", "then", "once", "so", "than", "too",
        "very", "not", "nor", "although", "though", "since", "unless", "upon", "near",
        "across", "around", "behind", "beyond", "despite", "except", "inside", "outside",
        "toward", "towards", "within", "without",
        // common sentence starters
        "now", "today", "yesterday", "tomorrow", "here", "there", "when", "where", "why",
        "how", "just", "also", "still", "yet", "soon", "later", "early", "last", "next",
        "first", "finally", "eventually", "suddenly", "sometimes", "often", "usually",
        "always", "never", "one", "two", "three", "four", "five", "six", "seven", "eight",
        "nine", "ten", "luckily", "unfortunately", "sadly", "happily", "recently",
        "afterwards", "afterward", "instead", "meanwhile", "however", "therefore",
        "overall", "little", "big", "good", "bad", "new", "old",
        // weekdays and months
        "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
        "january", "february", "march", "april", "may", "june", "july", "august",
        "september", "october", "november", "december"};
    return words;
}

const std::set<std::string> &object_cues() {
    // A name right after one of these is treated as an object ("me").
    static const std::set<std::string> cues = {
        "to",     "with",  "for",   "at",      "by",     "from",  "about",  "of",
        "on",     "in",    "near",  "toward",  "towards", "saw",  "met",    "told",
        "asked",  "gave",  "took",  "helped",  "called", "visited", "thanked", "loves",
        "likes",  "knows", "hates", "teaches", "brought", "joined", "invited"};
    return cues;
}

bool name_shaped(const std::string &tok) {
    if (tok.size() < 2)
        return false;
    if (!std::isupper(static_cast<unsigned char>(tok[0])))
        return false;
    for (std::size_t i = 1; i < tok.size(); ++i)
        if (!std::islower(static_cast<unsigned char>(tok[i])))
            return false;
    return true;
}

struct PronounRule {
    const char *from;
    const char *to;
};

// "her" is resolved separately: possessive before a plain word, object
// otherwise.
constexpr PronounRule kPronouns[] = {
    {"he", "I"},       {"she", "I"},      {"him", "me"},     {"his", "my"},
    {"hers", "mine"},  {"himself", "myself"}, {"herself", "myself"},
};

bool is_word(const std::string &tok) {
    return !tok.empty() && std::isalpha(static_cast<unsigned char>(tok[0]));
}

void recapitalize_sentence_start(std::vector<std::string> &tokens) {
    for (auto &tok : tokens) {
        if (!is_word(tok))
            continue;
        if (tok == "i")
            tok = "I";
        else if (std::islower(static_cast<unsigned char>(tok[0])))
            tok[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
        break;
    }
}

} // namespace

void RulePersonTagger::add_common_word(const std::string &w) {
    extra_common_.push_back(lowercase(w));
}

void RulePersonTagger::add_known_name(const std::string &w) { known_names_.push_back(w); }

std::vector<PersonSpan> RulePersonTagger::tag(const std::vector<std::string> &tokens) const {
    std::vector<PersonSpan> spans;
    std::size_t i = 0;
    auto is_name_token = [&](const std::string &tok) {
        if (std::find(known_names_.begin(), known_names_.end(), tok) != known_names_.end())
            return true;
        if (!name_shaped(tok))
            return false;
        std::string low = lowercase(tok);
        if (common_words().count(low))
            return false;
        if (std::find(extra_common_.begin(), extra_common_.end(), low) != extra_common_.end())
            return false;
        return true;
    };
    while (i < tokens.size()) {
        if (is_name_token(tokens[i])) {
            std::size_t j = i + 1;
            while (j < tokens.size() && is_name_token(tokens[j]))
                ++j;
            spans.push_back({i, j});
            i = j;
        } else {
            ++i;
        }
    }
    return spans;
}

void RuleAgreementCorrector::add_override(const std::string &third_person,
                                          const std::string &first_person) {
    overrides_[third_person] = first_person;
}

namespace {

const std::set<std::string> &skip_adverbs() {
    static const std::set<std::string> adv = {"always", "never",  "often", "usually",
                                              "really", "just",   "also",  "still",
                                              "sometimes", "rarely", "now", "truly"};
    return adv;
}

// Strips third-person-singular inflection: loves -> love, goes -> go,
// carries -> carry. Returns the input unchanged when it does not look like
// a 3sg verb form.
std::string strip_third_person_s(const std::string &verb) {
    if (verb.size() >= 4 && verb.ends_with("ies"))
        return verb.substr(0, verb.size() - 3) + "y";
    if (verb.size() >= 4 && verb.ends_with("es")) {
        std::string stem = verb.substr(0, verb.size() - 2);
        if (stem.ends_with("s") || stem.ends_with("x") || stem.ends_with("z") ||
            stem.ends_with("ch") || stem.ends_with("sh") || stem.ends_with("o"))
            return stem;
    }
    if (verb.size() >= 3 && verb.ends_with("s") && !verb.ends_with("ss") &&
        !verb.ends_with("us") && !verb.ends_with("is"))
        return verb.substr(0, verb.size() - 1);
    return verb;
}

} // namespace

void RuleAgreementCorrector::correct(std::vector<std::string> &tokens) const {
    static const std::unordered_map<std::string, std::string> irregular = {
        {"is", "am"}, {"was", "was"}, {"has", "have"}, {"does", "do"}, {"goes", "go"},
        {"isn't", "am not"}, {"doesn't", "don't"}, {"hasn't", "haven't"},
        {"wasn't", "wasn't"}};
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] != "I")
            continue;
        std::size_t v = i + 1;
        while (v < tokens.size() && skip_adverbs().count(lowercase(tokens[v])))
            ++v;
        if (v >= tokens.size() || !is_word(tokens[v]))
            continue;
        std::string low = lowercase(tokens[v]);
        auto ov = overrides_.find(low);
        if (ov != overrides_.end()) {
            tokens[v] = ov->second;
            continue;
        }
        auto irr = irregular.find(low);
        if (irr != irregular.end()) {
            tokens[v] = irr->second;
            continue;
        }
        tokens[v] = strip_third_person_s(low);
    }
}

PersonifyResult first_personify(const Story &raw_story, const PersonTagger &tagger,
                                const AgreementCorrector &corrector) {
    std::vector<std::vector<std::string>> sentence_tokens;
    std::vector<std::vector<PersonSpan>> sentence_spans;
    std::size_t entity_count = 0;
    for (const auto &sentence : raw_story.sentences) {
        auto tokens = split_sentence(sentence);
        auto spans = tagger.tag(tokens);
        entity_count += spans.size();
        sentence_tokens.push_back(std::move(tokens));
        sentence_spans.push_back(std::move(spans));
    }
    if (entity_count == 0)
        return {raw_story, 0};

    std::vector<std::string> new_sentences;
    for (std::size_t s = 0; s < sentence_tokens.size(); ++s) {
        const auto &tokens = sentence_tokens[s];
        const auto &spans = sentence_spans[s];
        std::vector<std::string> out;
        std::size_t span_idx = 0;
        for (std::size_t i = 0; i < tokens.size();) {
            if (span_idx < spans.size() && spans[span_idx].begin == i) {
                std::size_t end = spans[span_idx].end;
                bool possessive = end < tokens.size() && tokens[end] == "'s";
                if (possessive) {
                    out.push_back("my");
                    i = end + 1;
                } else {
                    bool object = !out.empty() && object_cues().count(lowercase(out.back()));
                    out.push_back(object ? "me" : "I");
                    i = end;
                }
                ++span_idx;
            } else {
                std::string tok = tokens[i];
                std::string low = lowercase(tok);
                bool replaced = false;
                if (low == "her") {
                    bool possessive = i + 1 < tokens.size() && is_word(tokens[i + 1]);
                    out.push_back(possessive ? "my" : "me");
                    replaced = true;
                } else {
                    for (const auto &rule : kPronouns) {
                        if (low == rule.from) {
                            out.push_back(rule.to);
                            replaced = true;
                            break;
                        }
                    }
                }
                if (!replaced)
                    out.push_back(tok);
                ++i;
            }
        }
        corrector.correct(out);
        recapitalize_sentence_start(out);
        new_sentences.push_back(detokenize(out));
    }
    return {Story::make(raw_story.id, raw_story.title, std::move(new_sentences)),
            entity_count};
}

// --- dialogue slicing ----------------------------------------------------------

std::vector<Turn> truncate_context(const std::vector<Turn> &preceding, std::size_t max_turns) {
    // Walk backwards until max_turns human turns are inside the window; the
    // trailing human turn opens the exchange that the target completes.
    std::size_t humans = 0;
    std::size_t start = 0;
    for (std::size_t i = preceding.size(); i-- > 0;) {
        if (preceding[i].speaker == Speaker::human) {
            ++humans;
            if (humans == max_turns) {
                start = i;
                break;
            }
        }
    }
    return std::vector<Turn>(preceding.begin() + static_cast<std::ptrdiff_t>(start),
                             preceding.end());
}

std::vector<DialogueSample> build_samples(const std::vector<Dialogue> &dialogues,
                                          std::size_t max_turns) {
    require(max_turns > 0, "max_turns must be positive");
    std::vector<DialogueSample> samples;
    for (const auto &d : dialogues) {
        require(!d.turns.empty(), "dialogue '", d.id, "': no turns");
        for (std::size_t t = 0; t < d.turns.size(); ++t) {
            Speaker expected = (t % 2 == 0) ? Speaker::human : Speaker::machine;
            if (d.turns[t].speaker != expected)
                fail("dialogue '", d.id, "': turns must alternate starting with human (turn ",
                     t, ")");
        }
        for (std::size_t t = 1; t < d.turns.size(); t += 2) {
            require(!d.turns[t].text.empty(), "dialogue '", d.id, "': empty machine turn ", t);
            DialogueSample sample;
            sample.dialogue_id = d.id;
            sample.persona = d.persona;
            std::vector<Turn> preceding(d.turns.begin(),
                                        d.turns.begin() + static_cast<std::ptrdiff_t>(t));
            sample.context = truncate_context(preceding, max_turns);
            sample.target = d.turns[t].text;
            samples.push_back(std::move(sample));
        }
    }
    return samples;
}

std::vector<DialogueSample> build_samples(const std::string &dialogue_file,
                                          std::size_t max_turns) {
    return build_samples(load_dialogues(dialogue_file), max_turns);
}

QueryMode parse_query_mode(const std::string &name) {
    if (name == "persona")
        return QueryMode::persona;
    if (name == "persona+dialogue" || name == "persona_dialogue")
        return QueryMode::persona_dialogue;
    if (name == "generated")
        return QueryMode::generated;
    if (name == "one_persona")
        return QueryMode::one_persona;
    fail("unknown query mode '", name, "'");
}

std::string query_mode_name(QueryMode mode) {
    switch (mode) {
    case QueryMode::persona: return "persona";
    case QueryMode::persona_dialogue: return "persona+dialogue";
    case QueryMode::generated: return "generated";
    case QueryMode::one_persona: return "one_persona";
    }
    return "?";
}

std::string make_query(const DialogueSample &sample, QueryMode mode, Rng &rng,
                       const std::string &draft) {
    switch (mode) {
    case QueryMode::persona:
        return join(sample.persona, " ");
    case QueryMode::persona_dialogue: {
        std::string q = join(sample.persona, " ");
        for (const auto &turn : sample.context) {
            q += " ";
            q += turn.text;
        }
        return q;
    }
    case QueryMode::one_persona:
        return sample.persona[rng.uniform_int(sample.persona.size())];
    case QueryMode::generated:
        require(!draft.empty(), "query mode 'generated' requires a draft response");
        return draft;
    }
    fail("unreachable query mode");
}

} // namespace lapdog
