#include "rgop/pipeline/evaluate.hpp"

#include <cstdio>
#include <fstream>

#include "rgop/errors.hpp"

namespace rgop::pipeline {

FoldEval evaluate_fold_with(const Corpus& corpus, const FoldPlan& plan, int fold,
                            const Predictor& predictor, int class_count) {
  if (fold < 0 || fold >= plan.k) throw ArgumentError("fold index out of range");
  FoldEval eval;
  eval.fold = fold;
  eval.confusion = ad::Tensor({class_count, class_count});
  for (const auto& seq : corpus.sequences) {
    if (plan.fold_of(seq.subject) != fold) continue;
    const int label = static_cast<int>(seq.label);
    if (label >= class_count)
      throw ConfigError("label outside the configured class space");
    const int pred = predictor(seq);
    if (pred < 0 || pred >= class_count)
      throw ConfigError("prediction outside the configured class space");
    eval.confusion[static_cast<std::size_t>(label) * class_count + pred] += 1.0;
    eval.correct += pred == label ? 1 : 0;
    ++eval.total;
  }
  return eval;
}

FoldEval evaluate_fold(const Corpus& corpus, const FoldPlan& plan, int fold,
                       const ad::ParamStore& params, const model::ModelConfig& cfg) {
  return evaluate_fold_with(
      corpus, plan, fold,
      [&](const LoadedSequence& seq) { return model::predict(seq.data, params, cfg); },
      cfg.class_count);
}

double EvalReport::mean_accuracy() const {
  if (folds.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& f : folds) acc += f.accuracy();
  return acc / static_cast<double>(folds.size());
}

ad::Tensor EvalReport::confusion_normalized() const {
  if (folds.empty()) return {};
  const int c = folds.front().confusion.dim(0);
  ad::Tensor sum({c, c});
  for (const auto& f : folds) sum.add_inplace(f.confusion);
  for (int r = 0; r < c; ++r) {
    double row = 0.0;
    for (int j = 0; j < c; ++j) row += sum[static_cast<std::size_t>(r) * c + j];
    if (row <= 0.0) continue;
    for (int j = 0; j < c; ++j) sum[static_cast<std::size_t>(r) * c + j] /= row;
  }
  return sum;
}

void write_folds_csv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing", path);
  out << "fold,accuracy\n";
  char buf[32];
  for (const auto& f : report.folds) {
    std::snprintf(buf, sizeof buf, "%.6f", f.accuracy());
    out << f.fold << ',' << buf << '\n';
  }
  if (!out) throw IoError("short write", path);
}

void write_confusion_csv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing", path);
  const ad::Tensor m = report.confusion_normalized();
  const int c = m.empty() ? 0 : m.dim(0);
  char buf[32];
  for (int r = 0; r < c; ++r) {
    for (int j = 0; j < c; ++j) {
      std::snprintf(buf, sizeof buf, "%.9f", m[static_cast<std::size_t>(r) * c + j]);
      out << buf << (j + 1 == c ? '\n' : ',');
    }
  }
  if (!out) throw IoError("short write", path);
}

}  // namespace rgop::pipeline
