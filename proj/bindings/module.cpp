#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cmtag/annotate.hpp"
#include "cmtag/cli.hpp"
#include "cmtag/config.hpp"
#include "cmtag/corpus.hpp"
#include "cmtag/crf.hpp"
#include "cmtag/embed.hpp"
#include "cmtag/eval.hpp"
#include "cmtag/hmm.hpp"
#include "cmtag/neural.hpp"
#include "cmtag/normalize.hpp"
#include "cmtag/synth.hpp"

namespace py = pybind11;
using namespace cmtag;

namespace {

CorpusFormat format_arg(const std::string& name) {
    auto format = parse_format(name);
    if (!format) throw DataError("unknown format \"" + name + "\" (plain or conll)");
    return *format;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "token-level language identification for code-switched text";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<UsageError>(m, "UsageError");

    py::enum_<LangTag>(m, "LangTag")
        .value("EN", LangTag::EN)
        .value("RU", LangTag::RU)
        .value("RS", LangTag::RS);
    m.def("tag_name", [](LangTag t) { return std::string(tag_name(t)); });
    m.def("parse_tag", [](const std::string& s) { return parse_tag(s); });

    py::class_<Sentence>(m, "Sentence")
        .def(py::init<>())
        .def(py::init([](std::vector<std::string> tokens, std::vector<LangTag> tags) {
                 Sentence s;
                 s.tokens = std::move(tokens);
                 s.tags = std::move(tags);
                 return s;
             }),
             py::arg("tokens"), py::arg("tags") = std::vector<LangTag>{})
        .def_readwrite("tokens", &Sentence::tokens)
        .def_readwrite("tags", &Sentence::tags)
        .def("annotated", &Sentence::annotated)
        .def("__len__", &Sentence::size)
        .def("__eq__", [](const Sentence& a, const Sentence& b) { return a == b; });

    py::class_<Corpus>(m, "Corpus")
        .def(py::init<>())
        .def_readwrite("sentences", &Corpus::sentences)
        .def_readwrite("annotated", &Corpus::annotated)
        .def("token_count", &Corpus::token_count)
        .def("__len__", &Corpus::size)
        .def("__eq__", [](const Corpus& a, const Corpus& b) { return a == b; });

    m.def(
        "read_corpus",
        [](const std::filesystem::path& path, const std::string& format) {
            return read_corpus(path, format_arg(format));
        },
        py::arg("path"), py::arg("format"));
    m.def(
        "write_corpus",
        [](const Corpus& corpus, const std::filesystem::path& path,
           const std::string& format) { write_corpus(corpus, path, format_arg(format)); },
        py::arg("corpus"), py::arg("path"), py::arg("format"));

    py::class_<SplitSpec>(m, "SplitSpec")
        .def(py::init<>())
        .def(py::init([](double train, double dev, double test, std::uint64_t seed) {
                 return SplitSpec{train, dev, test, seed};
             }),
             py::arg("train") = 0.8, py::arg("dev") = 0.1, py::arg("test") = 0.1,
             py::arg("seed") = 1)
        .def_readwrite("train_frac", &SplitSpec::train_frac)
        .def_readwrite("dev_frac", &SplitSpec::dev_frac)
        .def_readwrite("test_frac", &SplitSpec::test_frac)
        .def_readwrite("seed", &SplitSpec::seed);

    py::class_<SplitResult>(m, "SplitResult")
        .def_readonly("train", &SplitResult::train)
        .def_readonly("dev", &SplitResult::dev)
        .def_readonly("test", &SplitResult::test);
    m.def("split_corpus", &split_corpus, py::arg("corpus"), py::arg("spec"));

    py::class_<CorpusStats>(m, "CorpusStats")
        .def_readonly("sentence_count", &CorpusStats::sentence_count)
        .def_readonly("tag_tokens", &CorpusStats::tag_tokens)
        .def("total_tokens", &CorpusStats::total_tokens);
    m.def("corpus_stats", &corpus_stats, py::arg("corpus"));

    m.def("collapse_lengthening",
          [](const std::string& token) { return collapse_lengthening(token); },
          py::arg("token"));

    py::class_<Lexicon>(m, "Lexicon")
        .def(py::init<>())
        .def_readwrite("language", &Lexicon::language)
        .def_readonly("entries", &Lexicon::entries)
        .def_readonly("surface_variants", &Lexicon::surface_variants)
        .def("add_surface", [](Lexicon& lex, const std::string& raw) { lex.add_surface(raw); })
        .def("contains_base", &Lexicon::contains_base);
    m.def("load_lexicon", &load_lexicon, py::arg("path"), py::arg("language"));
    m.def("segment_spaceless",
          [](const std::string& text, const Lexicon& en, const Lexicon& ru) {
              return segment_spaceless(text, en, ru);
          },
          py::arg("text"), py::arg("en"), py::arg("ru"));
    m.def("dedup_sentences", &dedup_sentences, py::arg("corpus"));

    py::class_<AnnotationPolicy>(m, "AnnotationPolicy")
        .def(py::init<>())
        .def_readwrite("ambiguous_default", &AnnotationPolicy::ambiguous_default)
        .def_readwrite("capitalized_is_rs", &AnnotationPolicy::capitalized_is_rs)
        .def_readwrite("review_file", &AnnotationPolicy::review_file);
    py::class_<AnnotationResult>(m, "AnnotationResult")
        .def_readonly("corpus", &AnnotationResult::corpus)
        .def_readonly("unresolved", &AnnotationResult::unresolved);
    m.def("is_rest_token",
          [](const std::string& surface) { return is_rest_token(surface); });
    m.def("annotate_token",
          [](const std::string& surface, const Lexicon& en, const Lexicon& ru,
             const AnnotationPolicy& policy) {
              return annotate_token(surface, en, ru, policy);
          },
          py::arg("surface"), py::arg("en"), py::arg("ru"), py::arg("policy"));
    m.def("annotate_corpus", &annotate_corpus, py::arg("corpus"), py::arg("en"),
          py::arg("ru"), py::arg("policy"));

    py::class_<EmbedConfig>(m, "EmbedConfig")
        .def(py::init<>())
        .def_readwrite("dim", &EmbedConfig::dim)
        .def_readwrite("window", &EmbedConfig::window)
        .def_readwrite("epochs", &EmbedConfig::epochs)
        .def_readwrite("learning_rate", &EmbedConfig::learning_rate)
        .def_readwrite("min_ngram", &EmbedConfig::min_ngram)
        .def_readwrite("max_ngram", &EmbedConfig::max_ngram)
        .def_readwrite("negative_samples", &EmbedConfig::negative_samples)
        .def_readwrite("seed", &EmbedConfig::seed);
    py::class_<EmbeddingTable>(m, "EmbeddingTable")
        .def_readonly("dim", &EmbeddingTable::dim)
        .def_readonly("words", &EmbeddingTable::words)
        .def_readonly("ngrams", &EmbeddingTable::ngrams)
        .def("lookup",
             [](const EmbeddingTable& table, const std::string& token) {
                 return table.lookup(token);
             },
             py::arg("token"))
        .def("digest", &EmbeddingTable::digest);
    m.def("char_ngrams",
          [](const std::string& word, int min_n, int max_n) {
              return char_ngrams(word, min_n, max_n);
          },
          py::arg("word"), py::arg("min_ngram"), py::arg("max_ngram"));
    m.def("train_skipgram",
          [](const Corpus& corpus, const EmbedConfig& cfg) {
              return train_skipgram(corpus, cfg);
          },
          py::arg("corpus"), py::arg("config"));
    m.def("save_embeddings", &save_embeddings, py::arg("table"), py::arg("path"));
    m.def("load_embeddings", &load_embeddings, py::arg("path"));

    py::class_<HmmModel>(m, "HmmModel")
        .def_readonly("smoothing_k", &HmmModel::smoothing_k)
        .def_readonly("initial_log", &HmmModel::initial_log)
        .def_readonly("transition_log", &HmmModel::transition_log)
        .def("emission", &HmmModel::emission, py::arg("tag"), py::arg("surface"));
    m.def("train_hmm", &train_hmm, py::arg("train"), py::arg("smoothing_k"));
    m.def("viterbi", &viterbi, py::arg("model"), py::arg("sentence"));
    m.def("posterior_decode", &posterior_decode, py::arg("model"), py::arg("sentence"));
    m.def("forward_log_partition", &forward_log_partition, py::arg("model"),
          py::arg("sentence"));
    m.def("backward_log_partition", &backward_log_partition, py::arg("model"),
          py::arg("sentence"));
    m.def("save_hmm", &save_hmm, py::arg("model"), py::arg("path"));
    m.def("load_hmm", &load_hmm, py::arg("path"));

    py::class_<FeatureSet>(m, "FeatureSet")
        .def(py::init<>())
        .def_static("build", &FeatureSet::build, py::arg("train"))
        .def("__len__", &FeatureSet::size);
    py::class_<CrfTrainOpts>(m, "CrfTrainOpts")
        .def(py::init<>())
        .def_readwrite("l2", &CrfTrainOpts::l2)
        .def_readwrite("epochs", &CrfTrainOpts::epochs)
        .def_readwrite("step", &CrfTrainOpts::step);
    py::class_<CrfModel>(m, "CrfModel")
        .def_readonly("l2", &CrfModel::l2)
        .def("feature_count", [](const CrfModel& model) { return model.features.size(); });
    m.def("extract_features", &extract_features, py::arg("sentence"));
    m.def("train_crf",
          [](const Corpus& train, const FeatureSet& features, const CrfTrainOpts& opts) {
              return train_crf(train, features, opts);
          },
          py::arg("train"), py::arg("features"), py::arg("opts"));
    m.def("crf_decode", &crf_decode, py::arg("model"), py::arg("sentence"));
    m.def("crf_log_partition", &crf_log_partition, py::arg("model"), py::arg("sentence"));
    m.def("crf_sequence_score", &crf_sequence_score, py::arg("model"), py::arg("sentence"),
          py::arg("tags"));
    m.def("save_crf", &save_crf, py::arg("model"), py::arg("path"));
    m.def("load_crf", &load_crf, py::arg("path"));

    py::enum_<NeuralArch>(m, "NeuralArch")
        .value("BILSTM", NeuralArch::Bilstm)
        .value("ATTENTION", NeuralArch::Attention);
    py::class_<NeuralConfig>(m, "NeuralConfig")
        .def(py::init<>())
        .def_readwrite("arch", &NeuralConfig::arch)
        .def_readwrite("hidden", &NeuralConfig::hidden)
        .def_readwrite("tag_embed_dim", &NeuralConfig::tag_embed_dim)
        .def_readwrite("attention_dim", &NeuralConfig::attention_dim)
        .def_readwrite("epochs", &NeuralConfig::epochs)
        .def_readwrite("step", &NeuralConfig::step)
        .def_readwrite("clip", &NeuralConfig::clip)
        .def_readwrite("seed", &NeuralConfig::seed);
    py::class_<NeuralModel>(m, "NeuralModel")
        .def_readonly("arch", &NeuralModel::arch)
        .def_readonly("feature_dim", &NeuralModel::feature_dim)
        .def_readonly("embed_digest", &NeuralModel::embed_digest)
        .def("hidden_size", &NeuralModel::hidden_size);
    m.def("train_neural",
          [](const Corpus& train, const EmbeddingTable& table, const NeuralConfig& cfg) {
              return train_neural(train, table, cfg);
          },
          py::arg("train"), py::arg("table"), py::arg("config"));
    m.def("tag_neural", &tag_neural, py::arg("model"), py::arg("table"),
          py::arg("sentence"));
    m.def("save_neural", &save_neural, py::arg("model"), py::arg("path"));
    m.def("load_neural", &load_neural, py::arg("path"));

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("confusion", &EvalReport::confusion)
        .def_readonly("total", &EvalReport::total)
        .def_readonly("accuracy", &EvalReport::accuracy)
        .def_readonly("precision", &EvalReport::precision)
        .def_readonly("recall", &EvalReport::recall)
        .def_readonly("f1", &EvalReport::f1)
        .def_readonly("macro_precision", &EvalReport::macro_precision)
        .def_readonly("macro_recall", &EvalReport::macro_recall)
        .def_readonly("macro_f1", &EvalReport::macro_f1)
        .def_readonly("micro_f1", &EvalReport::micro_f1);
    m.def("evaluate", &evaluate, py::arg("gold"), py::arg("predicted"));
    m.def("format_report", &format_report, py::arg("report"));
    m.def("report_kv", &report_kv, py::arg("report"), py::arg("name"));
    m.def("compare",
          [](const std::vector<std::pair<std::string, EvalReport>>& reports) {
              std::vector<NamedReport> named;
              for (const auto& [name, report] : reports) named.push_back({name, report});
              return compare(named);
          },
          py::arg("reports"));

    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("sentences", &SynthConfig::sentences)
        .def_readwrite("vocab_per_language", &SynthConfig::vocab_per_language)
        .def_readwrite("shared_frac", &SynthConfig::shared_frac)
        .def_readwrite("lengthen_prob", &SynthConfig::lengthen_prob)
        .def_readwrite("switch_prob", &SynthConfig::switch_prob)
        .def_readwrite("digit_prob", &SynthConfig::digit_prob)
        .def_readwrite("punct_prob", &SynthConfig::punct_prob)
        .def_readwrite("min_tokens", &SynthConfig::min_tokens)
        .def_readwrite("max_tokens", &SynthConfig::max_tokens)
        .def_readwrite("seed", &SynthConfig::seed);
    py::class_<SynthData>(m, "SynthData")
        .def_readonly("corpus", &SynthData::corpus)
        .def_readonly("en_words", &SynthData::en_words)
        .def_readonly("ru_words", &SynthData::ru_words);
    m.def("generate_synthetic", &generate_synthetic, py::arg("config"));

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::vector<const char*> argv;
              argv.push_back("cmtag");
              for (const auto& arg : args) argv.push_back(arg.c_str());
              return cli_main(static_cast<int>(argv.size()), argv.data());
          },
          py::arg("args"),
          "Run a cmtag CLI invocation in-process; returns the exit code.");
}
