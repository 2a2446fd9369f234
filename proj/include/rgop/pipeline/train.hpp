#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgop/model/predict.hpp"
#include "rgop/pipeline/folds.hpp"
#include "rgop/run_config.hpp"

namespace rgop::pipeline {

/// One corpus sequence, residuals decoded once up front. The apex frame is
/// decoded only when the record carries an apex annotation and the loader
/// was asked for it (training with beta > 0 needs the pixel-domain target).
struct LoadedSequence {
  std::string subject;
  int subject_index = 0;
  synth::Expression label = synth::Expression::kNeutral;
  std::optional<int> apex_index;
  model::CompressedSequence data;
  std::optional<Frame> apex_frame;
};

struct Corpus {
  synth::DatasetManifest manifest;
  std::vector<std::string> subjects;  // sorted distinct subject ids
  std::vector<LoadedSequence> sequences;
};

Corpus load_corpus(const std::string& manifest_path, bool decode_apex);

/// Trains the identity encoder as a subject classifier over the corpus
/// I-frames, then returns only the encoder ("idnet.*"), frozen. The
/// classification head is dropped.
ad::ParamStore pretrain_identity(const Corpus& corpus, const RunConfig& cfg);

struct EpochLog {
  int epoch = 0;
  double ce = 0.0;
  std::optional<double> dis;  // absent when alpha == 0 or batches were too small
  std::optional<double> l1;   // absent when the apex constraint was off
  double beta_effective = 0.0;
  double total = 0.0;
};

struct TrainResult {
  ad::ParamStore params;  // fer.* + cls.* + dec.* (+ frozen idnet.*)
  std::vector<EpochLog> log;
};

/// Minimizes CE + alpha*L_dis + beta*L_1 over the fold's training subjects.
/// beta applies only to epochs below warm_epochs. Deterministic given
/// (config, corpus, fold): data order, init and updates all derive from the
/// run seed. Throws DivergenceError when the loss leaves the finite range.
TrainResult train_fold(const Corpus& corpus, const FoldPlan& plan, int fold,
                       const RunConfig& cfg, const ad::ParamStore& frozen_identity);

void write_train_log(const std::string& path, const std::vector<EpochLog>& log);

}  // namespace rgop::pipeline
