#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "cmtag/annotate.hpp"
#include "cmtag/corpus.hpp"
#include "cmtag/crf.hpp"
#include "cmtag/embed.hpp"
#include "cmtag/neural.hpp"

namespace cmtag {

// Bad invocations and malformed configuration. The CLI maps it to exit 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Settings for every pipeline stage, read from a sectioned key=value file.
// Unknown sections or keys are rejected; CLI flags override individual keys.
struct PipelineConfig {
    // [paths]
    std::optional<std::string> en_lexicon;
    std::optional<std::string> ru_lexicon;
    std::optional<std::string> embeddings;

    SplitSpec split;        // [split] train dev test seed
    EmbedConfig embed;      // [embed] dim window epochs step min_ngram max_ngram
                            //         negative seed
    double hmm_k = 0.1;     // [hmm] k
    CrfTrainOpts crf;       // [crf] l2 epochs step
    NeuralConfig neural;    // [neural] arch hidden tag_embed attention_dim epochs
                            //          step clip seed

    // [annotate] ambiguous (en|ru|unresolved), review (path), ne_heuristic
    AnnotationPolicy annotate;
};

PipelineConfig parse_pipeline_config(const std::filesystem::path& path);

}  // namespace cmtag
