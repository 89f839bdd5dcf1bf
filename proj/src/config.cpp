#include "cmtag/config.hpp"

#include <fstream>

#include "cmtag/textio.hpp"

namespace cmtag {

namespace {

std::string trim(std::string_view s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r'))
        --end;
    return std::string(s.substr(begin, end - begin));
}

[[noreturn]] void bad(const std::filesystem::path& path, std::size_t lineno,
                      const std::string& message) {
    throw UsageError(path.string() + ":" + std::to_string(lineno) + ": " + message);
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path.string());

    PipelineConfig cfg;
    std::string section;
    std::string line;
    std::size_t lineno = 0;

    auto to_double = [&](const std::string& v) {
        try {
            return parse_double(v);
        } catch (const DataError&) {
            bad(path, lineno, "expected a number, got \"" + v + "\"");
        }
    };
    auto to_int = [&](const std::string& v) {
        try {
            return static_cast<int>(parse_long(v));
        } catch (const DataError&) {
            bad(path, lineno, "expected an integer, got \"" + v + "\"");
        }
    };
    auto to_seed = [&](const std::string& v) {
        try {
            return static_cast<std::uint64_t>(parse_long(v));
        } catch (const DataError&) {
            bad(path, lineno, "expected an integer seed, got \"" + v + "\"");
        }
    };
    auto to_bool = [&](const std::string& v) {
        if (v == "on" || v == "true" || v == "1") return true;
        if (v == "off" || v == "false" || v == "0") return false;
        bad(path, lineno, "expected on/off, got \"" + v + "\"");
    };

    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        if (text.front() == '[') {
            if (text.back() != ']') bad(path, lineno, "malformed section header");
            section = text.substr(1, text.size() - 2);
            if (section != "paths" && section != "split" && section != "embed" &&
                section != "hmm" && section != "crf" && section != "neural" &&
                section != "annotate")
                bad(path, lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) bad(path, lineno, "expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (section.empty()) bad(path, lineno, "key \"" + key + "\" outside any section");

        if (section == "paths") {
            if (key == "en_lexicon") cfg.en_lexicon = value;
            else if (key == "ru_lexicon") cfg.ru_lexicon = value;
            else if (key == "embeddings") cfg.embeddings = value;
            else bad(path, lineno, "unknown key \"" + key + "\" in [paths]");
        } else if (section == "split") {
            if (key == "train") cfg.split.train_frac = to_double(value);
            else if (key == "dev") cfg.split.dev_frac = to_double(value);
            else if (key == "test") cfg.split.test_frac = to_double(value);
            else if (key == "seed") cfg.split.seed = to_seed(value);
            else bad(path, lineno, "unknown key \"" + key + "\" in [split]");
        } else if (section == "embed") {
            if (key == "dim") cfg.embed.dim = to_int(value);
            else if (key == "window") cfg.embed.window = to_int(value);
            else if (key == "epochs") cfg.embed.epochs = to_int(value);
            else if (key == "step") cfg.embed.learning_rate = to_double(value);
            else if (key == "min_ngram") cfg.embed.min_ngram = to_int(value);
            else if (key == "max_ngram") cfg.embed.max_ngram = to_int(value);
            else if (key == "negative") cfg.embed.negative_samples = to_int(value);
            else if (key == "seed") cfg.embed.seed = to_seed(value);
            else bad(path, lineno, "unknown key \"" + key + "\" in [embed]");
        } else if (section == "hmm") {
            if (key == "k") cfg.hmm_k = to_double(value);
            else bad(path, lineno, "unknown key \"" + key + "\" in [hmm]");
        } else if (section == "crf") {
            if (key == "l2") cfg.crf.l2 = to_double(value);
            else if (key == "epochs") cfg.crf.epochs = to_int(value);
            else if (key == "step") cfg.crf.step = to_double(value);
            else bad(path, lineno, "unknown key \"" + key + "\" in [crf]");
        } else if (section == "neural") {
            if (key == "arch") {
                auto arch = parse_arch(value);
                if (!arch) bad(path, lineno, "arch must be bilstm or attn");
                cfg.neural.arch = *arch;
            } else if (key == "hidden") cfg.neural.hidden = to_int(value);
            else if (key == "tag_embed") cfg.neural.tag_embed_dim = to_int(value);
            else if (key == "attention_dim") cfg.neural.attention_dim = to_int(value);
            else if (key == "epochs") cfg.neural.epochs = to_int(value);
            else if (key == "step") cfg.neural.step = to_double(value);
            else if (key == "clip") cfg.neural.clip = to_double(value);
            else if (key == "seed") cfg.neural.seed = to_seed(value);
            else bad(path, lineno, "unknown key \"" + key + "\" in [neural]");
        } else {  // annotate
            if (key == "ambiguous") {
                if (value == "unresolved") cfg.annotate.ambiguous_default.reset();
                else if (auto tag = parse_tag(value); tag && *tag != LangTag::RS)
                    cfg.annotate.ambiguous_default = *tag;
                else bad(path, lineno, "ambiguous must be en, ru or unresolved");
            } else if (key == "review") cfg.annotate.review_file = value;
            else if (key == "ne_heuristic") cfg.annotate.capitalized_is_rs = to_bool(value);
            else bad(path, lineno, "unknown key \"" + key + "\" in [annotate]");
        }
    }
    return cfg;
}

}  // namespace cmtag
