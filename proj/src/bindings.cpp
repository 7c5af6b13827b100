#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "condor/augment.hpp"
#include "condor/corpus.hpp"
#include "condor/errors.hpp"
#include "condor/evalrank.hpp"
#include "condor/model.hpp"
#include "condor/pairing.hpp"
#include "condor/textmetrics.hpp"
#include "condor/training.hpp"

namespace py = pybind11;
using namespace condor;

PYBIND11_MODULE(_condor, m) {
    m.doc() = "code-correctness discriminator: mining, augmentation, training, reranking";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

    // text metrics
    m.def("tokenize", &tokenize, py::arg("code"));
    m.def("edit_distance", &edit_distance, py::arg("a"), py::arg("b"));
    m.def("jaccard",
          py::overload_cast<std::string_view, std::string_view>(&jaccard),
          py::arg("code_a"), py::arg("code_b"));
    m.def("jaccard_tokens", py::overload_cast<const TokenSeq&, const TokenSeq&>(&jaccard),
          py::arg("a"), py::arg("b"));
    m.def("red", &red, py::arg("buggy"), py::arg("correct"));

    // corpus
    py::enum_<Verdict>(m, "Verdict")
        .value("Correct", Verdict::Correct)
        .value("Error", Verdict::Error);

    py::class_<CodeSample>(m, "CodeSample")
        .def(py::init<>())
        .def(py::init([](std::string problem_id, std::string problem, std::string code,
                         Verdict verdict, std::string group, std::uint64_t order) {
                 return CodeSample{std::move(problem_id), std::move(problem), std::move(code),
                                   verdict, std::move(group), order, ""};
             }),
             py::arg("problem_id"), py::arg("problem"), py::arg("code"), py::arg("verdict"),
             py::arg("group") = "", py::arg("order") = 0)
        .def_readwrite("problem_id", &CodeSample::problem_id)
        .def_readwrite("problem", &CodeSample::problem)
        .def_readwrite("code", &CodeSample::code)
        .def_readwrite("verdict", &CodeSample::verdict)
        .def_readwrite("group", &CodeSample::group)
        .def_readwrite("order", &CodeSample::order)
        .def_readwrite("origin", &CodeSample::origin);

    py::class_<RepairTriple>(m, "RepairTriple")
        .def(py::init<>())
        .def(py::init([](std::string problem_id, std::string problem, std::string buggy,
                         std::string correct) {
                 return RepairTriple{std::move(problem_id), std::move(problem),
                                     std::move(buggy), std::move(correct)};
             }),
             py::arg("problem_id"), py::arg("problem"), py::arg("buggy"), py::arg("correct"))
        .def_readwrite("problem_id", &RepairTriple::problem_id)
        .def_readwrite("problem", &RepairTriple::problem)
        .def_readwrite("buggy", &RepairTriple::buggy)
        .def_readwrite("correct", &RepairTriple::correct);

    py::class_<CorpusStats>(m, "CorpusStats")
        .def_readonly("problem_count", &CorpusStats::problem_count)
        .def_readonly("sample_count", &CorpusStats::sample_count)
        .def_readonly("avg_problem_tokens", &CorpusStats::avg_problem_tokens)
        .def_readonly("avg_buggy_tokens", &CorpusStats::avg_buggy_tokens)
        .def_readonly("avg_correct_tokens", &CorpusStats::avg_correct_tokens)
        .def_readonly("avg_edit_distance", &CorpusStats::avg_edit_distance)
        .def_readonly("avg_relative_edit_distance", &CorpusStats::avg_relative_edit_distance);

    m.def("normalize_newlines", &normalize_newlines, py::arg("text"));
    m.def("load_corpus", &load_corpus, py::arg("path"));
    m.def("save_corpus", &save_corpus, py::arg("samples"), py::arg("path"));
    m.def("load_triples", &load_triples, py::arg("path"));
    m.def("save_triples", &save_triples, py::arg("triples"), py::arg("path"));
    m.def("corpus_stats", &corpus_stats, py::arg("triples"));

    // pairing
    py::class_<ContrastPair>(m, "ContrastPair")
        .def(py::init<>())
        .def_readwrite("problem_id", &ContrastPair::problem_id)
        .def_readwrite("problem", &ContrastPair::problem)
        .def_readwrite("code_a", &ContrastPair::code_a)
        .def_readwrite("code_b", &ContrastPair::code_b)
        .def_readwrite("label", &ContrastPair::label)
        .def_readwrite("similarity", &ContrastPair::similarity);

    m.def("mine_pairs", &mine_pairs, py::arg("samples"),
          py::arg("threshold") = kDefaultJaccardThreshold);
    m.def("build_triples", &build_triples, py::arg("samples"),
          py::arg("threshold") = kDefaultJaccardThreshold);
    m.def("load_pairs", &load_pairs, py::arg("path"));
    m.def("save_pairs", &save_pairs, py::arg("pairs"), py::arg("path"));

    // augmentation
    py::class_<Hunk>(m, "Hunk")
        .def(py::init<>())
        .def_readwrite("old_start", &Hunk::old_start)
        .def_readwrite("old_lines", &Hunk::old_lines)
        .def_readwrite("new_lines", &Hunk::new_lines);

    py::class_<DiffScript>(m, "DiffScript")
        .def_readonly("hunks", &DiffScript::hunks)
        .def_readonly("source", &DiffScript::source)
        .def_readonly("target", &DiffScript::target);

    py::class_<IntermediateVersion>(m, "IntermediateVersion")
        .def_readonly("code", &IntermediateVersion::code)
        .def_readonly("applied_count", &IntermediateVersion::applied_count);

    m.def("split_lines", &split_lines, py::arg("text"));
    m.def("join_lines", &join_lines, py::arg("lines"));
    m.def("line_diff", &line_diff, py::arg("old_lines"), py::arg("new_lines"));
    m.def("apply_hunks", &apply_hunks, py::arg("lines"), py::arg("hunks"));
    m.def("compute_hunks", &compute_hunks, py::arg("buggy"), py::arg("correct"));
    m.def("generate_intermediates", &generate_intermediates, py::arg("script"));
    m.def("augment_dataset", &augment_dataset, py::arg("triples"), py::arg("existing"));

    // model
    py::class_<EncoderParams>(m, "EncoderParams")
        .def_static("zeros", &EncoderParams::zeros, py::arg("vocab_buckets"),
                    py::arg("embed_dim"), py::arg("proj_dim"))
        .def_readonly("vocab_buckets", &EncoderParams::vocab_buckets)
        .def_readonly("embed_dim", &EncoderParams::embed_dim)
        .def_readonly("proj_dim", &EncoderParams::proj_dim)
        .def("all_finite", &EncoderParams::all_finite);

    py::class_<LabeledSample>(m, "LabeledSample")
        .def(py::init([](std::string problem, std::string code, int label) {
                 return LabeledSample{std::move(problem), std::move(code), label};
             }),
             py::arg("problem"), py::arg("code"), py::arg("label"))
        .def_readwrite("problem", &LabeledSample::problem)
        .def_readwrite("code", &LabeledSample::code)
        .def_readwrite("label", &LabeledSample::label);

    m.def("token_bucket", &token_bucket, py::arg("token"), py::arg("vocab_buckets"));
    m.def("pooled_features", &pooled_features, py::arg("params"), py::arg("problem"),
          py::arg("code"));
    m.def("embed", &embed, py::arg("params"), py::arg("problem"), py::arg("code"));
    m.def(
        "pair_distance",
        [](const EncoderParams& params, const std::string& problem_a, const std::string& code_a,
           const std::string& problem_b, const std::string& code_b) {
            return pair_distance(params, {problem_a, code_a}, {problem_b, code_b});
        },
        py::arg("params"), py::arg("problem_a"), py::arg("code_a"), py::arg("problem_b"),
        py::arg("code_b"));
    m.def("predict_prob", &predict_prob, py::arg("params"), py::arg("problem"), py::arg("code"));
    m.def("bce_loss", &bce_loss, py::arg("params"), py::arg("samples"));
    m.def("save_checkpoint", &save_checkpoint, py::arg("params"), py::arg("path"));
    m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

    // training
    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("margin", &TrainConfig::margin)
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs_contrastive", &TrainConfig::epochs_contrastive)
        .def_readwrite("epochs_classifier", &TrainConfig::epochs_classifier)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("vocab_buckets", &TrainConfig::vocab_buckets)
        .def_readwrite("embed_dim", &TrainConfig::embed_dim)
        .def_readwrite("proj_dim", &TrainConfig::proj_dim);

    py::class_<DistancePoint>(m, "DistancePoint")
        .def_readonly("epoch", &DistancePoint::epoch)
        .def_readonly("mean_cc_distance", &DistancePoint::mean_cc_distance)
        .def_readonly("mean_ec_distance", &DistancePoint::mean_ec_distance);

    m.def("train_contrastive", &train_contrastive, py::arg("pairs"), py::arg("config"));
    m.def("train_classifier", &train_classifier, py::arg("samples"), py::arg("init"),
          py::arg("config"));
    m.def("finite_diff_check", &finite_diff_check, py::arg("config"), py::arg("trials"));
    m.def("save_trace", &save_trace, py::arg("trace"), py::arg("path"));

    // evaluation and reranking
    py::class_<Candidate>(m, "Candidate")
        .def(py::init([](std::string code, std::optional<int> label) {
                 return Candidate{std::move(code), label};
             }),
             py::arg("code"), py::arg("label") = std::nullopt)
        .def_readwrite("code", &Candidate::code)
        .def_readwrite("label", &Candidate::label);

    py::class_<CandidateSet>(m, "CandidateSet")
        .def(py::init([](std::string problem_id, std::string problem,
                         std::vector<Candidate> candidates) {
                 return CandidateSet{std::move(problem_id), std::move(problem),
                                     std::move(candidates)};
             }),
             py::arg("problem_id"), py::arg("problem"), py::arg("candidates"))
        .def_readwrite("problem_id", &CandidateSet::problem_id)
        .def_readwrite("problem", &CandidateSet::problem)
        .def_readwrite("candidates", &CandidateSet::candidates);

    py::class_<RankResult>(m, "RankResult")
        .def_readonly("problem_id", &RankResult::problem_id)
        .def_readonly("probs", &RankResult::probs)
        .def_readonly("selected", &RankResult::selected);

    py::class_<ClassificationMetrics>(m, "ClassificationMetrics")
        .def_readonly("precision", &ClassificationMetrics::precision)
        .def_readonly("recall", &ClassificationMetrics::recall)
        .def_readonly("f1", &ClassificationMetrics::f1);

    py::class_<ConfusionCounts>(m, "ConfusionCounts")
        .def(py::init([](std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                         std::uint64_t tn) { return ConfusionCounts{tp, fp, fn, tn}; }),
             py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn") = 0)
        .def_readwrite("tp", &ConfusionCounts::tp)
        .def_readwrite("fp", &ConfusionCounts::fp)
        .def_readwrite("fn", &ConfusionCounts::fn)
        .def_readwrite("tn", &ConfusionCounts::tn);

    m.def("select", &condor::select, py::arg("probs"));
    m.def("rank_candidates", &rank_candidates, py::arg("params"), py::arg("sets"));
    m.def("pass_at_1", &pass_at_1, py::arg("sets"), py::arg("results"));
    m.def("metrics_from_confusion", &metrics_from_confusion, py::arg("counts"));
    m.def("classification_metrics", &classification_metrics, py::arg("preds"),
          py::arg("labels"));
    m.def("classify", &classify, py::arg("params"), py::arg("samples"),
          py::arg("threshold") = 0.5);
    m.def("load_candidate_sets", &load_candidate_sets, py::arg("path"));
    m.def("save_candidate_sets", &save_candidate_sets, py::arg("sets"), py::arg("path"));
    m.def("save_rank_results", &save_rank_results, py::arg("results"), py::arg("path"));

#ifdef CONDOR_VERSION
    m.attr("__version__") = CONDOR_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
