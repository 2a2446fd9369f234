#include "rgop/pipeline/train.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rgop/errors.hpp"
#include "rgop/model/network.hpp"
#include "rgop/rng.hpp"

namespace rgop::pipeline {

using ad::Tensor;
using ad::Value;

Corpus load_corpus(const std::string& manifest_path, bool decode_apex) {
  Corpus corpus;
  corpus.manifest = synth::read_manifest(manifest_path);
  corpus.subjects = corpus.manifest.distinct_subjects();

  std::map<std::string, int> subject_index;
  for (std::size_t i = 0; i < corpus.subjects.size(); ++i)
    subject_index[corpus.subjects[i]] = static_cast<int>(i);

  corpus.sequences.reserve(corpus.manifest.records.size());
  for (std::size_t i = 0; i < corpus.manifest.records.size(); ++i) {
    const auto& rec = corpus.manifest.records[i];
    const codec::Bitstream bs = codec::load_bitstream(corpus.manifest.resolve(rec));
    LoadedSequence seq;
    seq.subject = rec.subject;
    seq.subject_index = subject_index.at(rec.subject);
    seq.label = rec.label;
    seq.apex_index = rec.apex_index;
    seq.data = model::CompressedSequence::from_bitstream(bs);
    if (static_cast<int>(bs.frame_count()) != rec.frame_count)
      throw ParseError("manifest row " + std::to_string(i + 1) + ": frame count mismatch", i + 1);
    if (decode_apex && rec.apex_index) {
      const std::vector<Frame> frames = codec::decode_video(bs);
      seq.apex_frame = frames.at(static_cast<std::size_t>(*rec.apex_index));
    }
    corpus.sequences.push_back(std::move(seq));
  }
  return corpus;
}

ad::ParamStore pretrain_identity(const Corpus& corpus, const RunConfig& cfg) {
  const auto& mc = cfg.model;
  const int n_subjects = static_cast<int>(corpus.subjects.size());
  if (n_subjects < 2) throw ArgumentError("identity pretraining needs at least 2 subjects");

  Rng init_rng(mix_seed(cfg.seed, "idnet-init"));
  ad::ParamStore store;
  model::init_identity_params(store, mc, init_rng);
  {
    // temporary classification head, dropped after pretraining
    const int feat = mc.z_i_dim;
    Tensor w({n_subjects, feat});
    const double limit = std::sqrt(6.0 / (feat + n_subjects));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = init_rng.uniform(-limit, limit);
    store.add("idhead.w", std::move(w));
    store.add("idhead.b", Tensor({n_subjects}));
  }

  const std::size_t n = corpus.sequences.size();
  const std::size_t image_elems = static_cast<std::size_t>(3) * mc.frame_height * mc.frame_width;
  std::vector<Tensor> images;
  images.reserve(n);
  for (const auto& seq : corpus.sequences)
    images.push_back(model::make_identity_input(seq.data.i_frame));

  ad::AdamConfig adam{cfg.id_lr, 0.9, 0.999, 1e-8};
  ad::AdamState state;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.id_epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(cfg.seed, "idnet-shuffle", static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.id_batch)) {
      const std::size_t count = std::min(n - start, static_cast<std::size_t>(cfg.id_batch));
      Tensor batch({static_cast<int>(count), 3, mc.frame_height, mc.frame_width});
      std::vector<int> labels(count);
      for (std::size_t b = 0; b < count; ++b) {
        const std::size_t idx = order[start + b];
        std::copy(images[idx].data(), images[idx].data() + image_elems,
                  batch.data() + b * image_elems);
        labels[b] = corpus.sequences[idx].subject_index;
      }
      ad::Tape tape(&store);
      const Value in = tape.input(std::move(batch));
      const Value feat = model::identity_features_t(tape, in, mc);
      const Value logits = tape.linear(feat, tape.param("idhead.w"), tape.param("idhead.b"));
      const Value loss = tape.softmax_ce(logits, labels);
      if (!std::isfinite(tape.val(loss).item()))
        throw DivergenceError("identity pretraining loss became non-finite");
      const ad::GradMap grads = tape.backward(loss);
      ad::adam_step(store, grads, adam, state);
    }
  }

  ad::ParamStore frozen;
  for (const auto& [name, entry] : store)
    if (name.rfind("idnet.", 0) == 0) frozen.add(name, entry.value, /*trainable=*/false);
  return frozen;
}

namespace {

struct BatchLossTerms {
  double ce = 0.0;
  std::optional<double> dis;
  std::optional<double> l1;
  double total = 0.0;
};

std::string format_losses(const BatchLossTerms& t) {
  std::ostringstream os;
  os << "ce=" << t.ce;
  if (t.dis) os << " dis=" << *t.dis;
  if (t.l1) os << " l1=" << *t.l1;
  os << " total=" << t.total;
  return os.str();
}

}  // namespace

TrainResult train_fold(const Corpus& corpus, const FoldPlan& plan, int fold,
                       const RunConfig& cfg, const ad::ParamStore& frozen_identity) {
  cfg.validate();
  if (fold < 0 || fold >= plan.k) throw ArgumentError("fold index out of range");
  const auto& mc = cfg.model;

  std::vector<std::size_t> train_idx;
  for (std::size_t i = 0; i < corpus.sequences.size(); ++i)
    if (plan.fold_of(corpus.sequences[i].subject) != fold) train_idx.push_back(i);
  if (train_idx.empty()) throw ArgumentError("fold has no training sequences");

  // model parameters: trainable recognition branch + decoder, frozen identity
  Rng init_rng(mix_seed(cfg.seed, "train-init", static_cast<std::uint64_t>(fold)));
  ad::ParamStore params;
  model::init_fer_params(params, mc, init_rng);
  model::init_decoder_params(params, mc, init_rng);
  params.adopt(frozen_identity, "", /*trainable=*/false);

  // frozen features are constant; compute them once
  std::vector<Tensor> z_i(corpus.sequences.size());
  for (const std::size_t idx : train_idx)
    z_i[idx] = model::extract_identity(corpus.sequences[idx].data.i_frame, params, mc);

  const bool use_apex = cfg.weights.beta > 0.0 && cfg.warm_epochs > 0;
  const std::size_t input_elems =
      static_cast<std::size_t>(mc.input_channels()) * mc.frame_height * mc.frame_width;
  const bool with_motion = mc.input_mode == model::InputMode::kResidualPlusMotion;

  ad::AdamState adam_state;
  std::vector<EpochLog> log;
  BatchLossTerms last_finite;

  std::vector<std::size_t> order = train_idx;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double beta_eff = epoch < cfg.warm_epochs ? cfg.weights.beta : 0.0;
    Rng shuffle_rng(mix_seed(cfg.seed, "train-shuffle", static_cast<std::uint64_t>(fold),
                             static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double ce_sum = 0.0, dis_sum = 0.0, l1_sum = 0.0, total_sum = 0.0;
    int batches = 0, dis_batches = 0, l1_batches = 0;

    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t count = std::min(order.size() - start, static_cast<std::size_t>(cfg.batch_size));

      // stack every P-frame of the batch for one conv pass
      int total_t = 0;
      for (std::size_t b = 0; b < count; ++b)
        total_t += static_cast<int>(corpus.sequences[order[start + b]].data.p_frames.size());
      Tensor inputs({total_t, mc.input_channels(), mc.frame_height, mc.frame_width});
      std::vector<int> labels(count);
      std::vector<int> offsets(count + 1, 0);
      {
        int t = 0;
        for (std::size_t b = 0; b < count; ++b) {
          const auto& seq = corpus.sequences[order[start + b]];
          labels[b] = static_cast<int>(seq.label);
          offsets[b] = t;
          for (const auto& [mv, res] : seq.data.p_frames) {
            const Tensor x = model::make_fer_input(res, with_motion ? &mv : nullptr, mc);
            std::copy(x.data(), x.data() + input_elems, inputs.data() + static_cast<std::size_t>(t) * input_elems);
            ++t;
          }
        }
        offsets[count] = t;
      }

      ad::Tape tape(&params);
      const Value in = tape.input(std::move(inputs));
      const Value embeds = model::embed_frames_t(tape, in, mc);
      std::vector<Value> z_e_rows;
      z_e_rows.reserve(count);
      for (std::size_t b = 0; b < count; ++b)
        z_e_rows.push_back(model::aggregate_t(tape, embeds, offsets[b], offsets[b + 1] - offsets[b], mc));
      const Value z_e_batch = tape.stack_rows(z_e_rows);
      const Value logits = model::classify_t(tape, z_e_batch);
      const Value ce = tape.softmax_ce(logits, labels);

      std::optional<Value> dis;
      if (count >= 2) {
        Tensor z_i_batch({static_cast<int>(count), mc.z_i_dim});
        for (std::size_t b = 0; b < count; ++b) {
          const Tensor& z = z_i[order[start + b]];
          std::copy(z.data(), z.data() + z.size(),
                    z_i_batch.data() + b * static_cast<std::size_t>(mc.z_i_dim));
        }
        dis = model::independence_penalty_t(tape, z_e_batch, tape.input(std::move(z_i_batch)));
      }

      std::optional<Value> l1;
      if (use_apex && beta_eff > 0.0) {
        std::vector<std::pair<double, Value>> seq_losses;
        for (std::size_t b = 0; b < count; ++b) {
          const auto& seq = corpus.sequences[order[start + b]];
          if (!seq.apex_frame) continue;  // no annotation: constraint off for this sequence
          const Value z_i_leaf = tape.input(z_i[order[start + b]]);
          const Value recon = model::reconstruct_apex_t(tape, z_i_leaf, z_e_rows[b], mc);
          const Value target = tape.input(model::make_identity_input(*seq.apex_frame));
          seq_losses.emplace_back(0.0, tape.l2_loss(recon, target));
        }
        if (!seq_losses.empty()) {
          for (auto& [w, v] : seq_losses) w = 1.0 / static_cast<double>(seq_losses.size());
          l1 = tape.weighted_sum(seq_losses);
        }
      }

      const model::LossWeights eff{cfg.weights.alpha, beta_eff};
      const Value total = model::total_loss_t(tape, ce, dis, l1, eff);

      BatchLossTerms terms;
      terms.ce = tape.val(ce).item();
      if (dis) terms.dis = tape.val(*dis).item();
      if (l1) terms.l1 = tape.val(*l1).item();
      terms.total = tape.val(total).item();
      if (!std::isfinite(terms.total))
        throw DivergenceError("training loss became non-finite at epoch " + std::to_string(epoch) +
                              "; last finite losses: " + format_losses(last_finite));
      last_finite = terms;

      const ad::GradMap grads = tape.backward(total);
      ad::adam_step(params, grads, cfg.adam, adam_state);

      ce_sum += terms.ce;
      total_sum += terms.total;
      if (terms.dis) {
        dis_sum += *terms.dis;
        ++dis_batches;
      }
      if (terms.l1) {
        l1_sum += *terms.l1;
        ++l1_batches;
      }
      ++batches;
    }

    EpochLog e;
    e.epoch = epoch;
    e.ce = ce_sum / batches;
    if (cfg.weights.alpha > 0.0 && dis_batches > 0) e.dis = dis_sum / dis_batches;
    if (l1_batches > 0) e.l1 = l1_sum / l1_batches;
    e.beta_effective = beta_eff;
    e.total = total_sum / batches;
    log.push_back(e);
  }

  return TrainResult{std::move(params), std::move(log)};
}

void write_train_log(const std::string& path, const std::vector<EpochLog>& log) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing", path);
  out << "epoch,ce,dis,l1,beta,total\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (const auto& e : log) {
    out << e.epoch << ',' << num(e.ce) << ',';
    if (e.dis) out << num(*e.dis);
    out << ',';
    if (e.l1) out << num(*e.l1);
    out << ',' << num(e.beta_effective) << ',' << num(e.total) << '\n';
  }
  if (!out) throw IoError("short write", path);
}

}  // namespace rgop::pipeline
