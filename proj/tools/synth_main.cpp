#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cmtag/synth.hpp"

// Regenerates the bundled fixtures. Writes the gold conll corpus, its plain
// (surface-only) form, and both lexicon files.
int main(int argc, char** argv) {
    CLI::App app{"seeded synthetic bilingual corpus generator"};
    cmtag::SynthConfig cfg;
    std::string out_conll, out_plain, out_en, out_ru;
    app.add_option("--sentences", cfg.sentences, "sentence count");
    app.add_option("--vocab", cfg.vocab_per_language, "words per language");
    app.add_option("--shared-frac", cfg.shared_frac, "shared vocabulary fraction");
    app.add_option("--lengthen-prob", cfg.lengthen_prob, "character lengthening rate");
    app.add_option("--switch-prob", cfg.switch_prob, "language switch rate");
    app.add_option("--digit-prob", cfg.digit_prob, "numeric token rate");
    app.add_option("--punct-prob", cfg.punct_prob, "final punctuation rate");
    app.add_option("--min-tokens", cfg.min_tokens, "min sentence length");
    app.add_option("--max-tokens", cfg.max_tokens, "max sentence length");
    app.add_option("--seed", cfg.seed, "generator seed");
    app.add_option("--out-conll", out_conll, "gold corpus path")->required();
    app.add_option("--out-plain", out_plain, "plain corpus path");
    app.add_option("--out-en-lexicon", out_en, "English lexicon path");
    app.add_option("--out-ru-lexicon", out_ru, "Roman Urdu lexicon path");
    CLI11_PARSE(app, argc, argv);

    try {
        const cmtag::SynthData data = cmtag::generate_synthetic(cfg);
        cmtag::write_corpus(data.corpus, out_conll, cmtag::CorpusFormat::Conll);
        if (!out_plain.empty())
            cmtag::write_corpus(data.corpus, out_plain, cmtag::CorpusFormat::Plain);
        auto write_lexicon = [](const std::string& path,
                                const std::vector<std::string>& words) {
            if (path.empty()) return;
            std::ofstream out(path);
            for (const auto& word : words) out << word << "\n";
        };
        write_lexicon(out_en, data.en_words);
        write_lexicon(out_ru, data.ru_words);
        const auto stats = cmtag::corpus_stats(data.corpus);
        std::cout << "generated " << stats.sentence_count << " sentences, tokens en="
                  << stats.tag_tokens[0] << " ru=" << stats.tag_tokens[1]
                  << " rs=" << stats.tag_tokens[2] << " (seed " << cfg.seed << ")\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
