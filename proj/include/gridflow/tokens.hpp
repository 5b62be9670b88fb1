#pragma once

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gridflow/common.hpp"

namespace gridflow {

// ---------------------------------------------------------------------------
// One flat vocabulary shared by every task: a reserved block, the closed word
// grammar, and the visual codebook ids. Text and visual tokens occupy disjoint
// id ranges, each modality with its own MASK id, so a single output head
// serves all tasks.
// ---------------------------------------------------------------------------

enum SegmentTag : int8_t {
    SEG_INSTRUCTION = 0,
    SEG_REF_IMAGE = 1,
    SEG_TGT_IMAGE = 2,
    SEG_ANSWER_TEXT = 3,
    SEG_REFLECTION = 4,
};
constexpr int kNumSegmentTags = 5;

struct Vocab {
    // Reserved ids.
    static constexpr TokenId PAD = 0;
    static constexpr TokenId UNCOND = 1;  // instruction replacement for condition dropout
    static constexpr TokenId MASK_TXT = 2;
    static constexpr TokenId MASK_VIS = 3;
    static constexpr TokenId SEG_INSTR = 4;  // segment delimiter tokens
    static constexpr TokenId SEG_REF = 5;
    static constexpr TokenId SEG_TGT = 6;
    static constexpr TokenId SEG_ANS = 7;
    static constexpr TokenId SEG_REFL = 8;
    static constexpr TokenId FIRST_WORD = 9;

    std::vector<std::string> words;           // closed grammar, <= 64 entries
    std::map<std::string, TokenId> word_ids;  // word -> global id
    TokenId first_visual = 0;                 // first visual content id
    int n_visual = 0;                         // visual content ids (EMPTY + shape*color)

    int size() const { return first_visual + n_visual; }

    bool is_word(TokenId id) const {
        return id >= FIRST_WORD && id < FIRST_WORD + static_cast<TokenId>(words.size());
    }
    bool is_visual(TokenId id) const { return id >= first_visual && id < first_visual + n_visual; }
    bool is_reserved(TokenId id) const { return id >= 0 && id < FIRST_WORD; }

    TokenId word(const std::string& w) const {
        auto it = word_ids.find(w);
        if (it == word_ids.end()) throw ValidationError("unknown word token: '" + w + "'");
        return it->second;
    }

    const std::string& word_text(TokenId id) const {
        if (!is_word(id)) throw ValidationError("token id " + std::to_string(id) + " is not a word");
        return words[id - FIRST_WORD];
    }

    TokenList tokenize(const std::string& text) const {
        TokenList out;
        std::istringstream ss(text);
        std::string w;
        while (ss >> w) out.push_back(word(w));
        return out;
    }

    std::string detokenize(const TokenList& ids) const {
        std::string out;
        for (size_t i = 0; i < ids.size(); ++i) {
            if (i) out += ' ';
            out += word_text(ids[i]);
        }
        return out;
    }
};

inline const std::vector<std::string>& grammar_words() {
    static const std::vector<std::string> kWords = {
        "a", "and", "at", "row", "col", "to", "the", "is", "are", "now",
        "what", "where", "how", "many", "empty", "grid", "objects", "describe",
        "color", "shape",
        "add", "remove", "move", "recolor", "swap", "removed", "swapped",
        "red", "green", "blue", "yellow",
        "square", "circle", "triangle",
        "0", "1", "2", "3", "4", "5", "6", "7", "8",
    };
    return kWords;
}

constexpr int kNumShapes = 3;
constexpr int kNumColors = 4;
constexpr int kVisualContentIds = 1 + kNumShapes * kNumColors;  // EMPTY + combos

inline const Vocab& vocab() {
    static const Vocab v = [] {
        Vocab vb;
        vb.words = grammar_words();
        for (size_t i = 0; i < vb.words.size(); ++i)
            vb.word_ids[vb.words[i]] = Vocab::FIRST_WORD + static_cast<TokenId>(i);
        vb.first_visual = Vocab::FIRST_WORD + static_cast<TokenId>(vb.words.size());
        vb.n_visual = kVisualContentIds;
        return vb;
    }();
    return v;
}

inline const char* shape_name(int s) {
    static const char* names[kNumShapes] = {"square", "circle", "triangle"};
    return names[s];
}
inline const char* color_name(int c) {
    static const char* names[kNumColors] = {"red", "green", "blue", "yellow"};
    return names[c];
}

inline int shape_from_name(const std::string& s) {
    for (int i = 0; i < kNumShapes; ++i)
        if (s == shape_name(i)) return i;
    return -1;
}
inline int color_from_name(const std::string& s) {
    for (int i = 0; i < kNumColors; ++i)
        if (s == color_name(i)) return i;
    return -1;
}

/// MASK id appropriate for a segment's modality.
inline TokenId mask_id_for_segment(SegmentTag tag) {
    return (tag == SEG_REF_IMAGE || tag == SEG_TGT_IMAGE) ? Vocab::MASK_VIS : Vocab::MASK_TXT;
}

inline TokenId delimiter_for_segment(SegmentTag tag) {
    switch (tag) {
        case SEG_INSTRUCTION: return Vocab::SEG_INSTR;
        case SEG_REF_IMAGE: return Vocab::SEG_REF;
        case SEG_TGT_IMAGE: return Vocab::SEG_TGT;
        case SEG_ANSWER_TEXT: return Vocab::SEG_ANS;
        case SEG_REFLECTION: return Vocab::SEG_REFL;
    }
    throw ValidationError("bad segment tag");
}

}  // namespace gridflow
