#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rgop/pipeline/train.hpp"

namespace rgop::pipeline {

/// Per-fold evaluation fragment: raw confusion counts plus totals.
struct FoldEval {
  int fold = 0;
  int correct = 0;
  int total = 0;
  ad::Tensor confusion;  // [C, C] counts, row = true label

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

using Predictor = std::function<int(const LoadedSequence&)>;

/// Evaluates the fold's test subjects with an arbitrary predictor
/// (unit tests inject perfect/constant predictors here).
FoldEval evaluate_fold_with(const Corpus& corpus, const FoldPlan& plan, int fold,
                            const Predictor& predictor, int class_count);

/// Standard path: the compressed-domain predict() on a trained checkpoint.
FoldEval evaluate_fold(const Corpus& corpus, const FoldPlan& plan, int fold,
                       const ad::ParamStore& params, const model::ModelConfig& cfg);

struct EvalReport {
  std::vector<FoldEval> folds;

  double mean_accuracy() const;
  /// Row-normalized aggregate confusion matrix; rows with no samples stay zero.
  ad::Tensor confusion_normalized() const;
};

void write_folds_csv(const std::string& path, const EvalReport& report);
void write_confusion_csv(const std::string& path, const EvalReport& report);

}  // namespace rgop::pipeline
