#pragma once

#include <optional>

#include "rgop/ad/optim.hpp"
#include "rgop/ad/param_store.hpp"
#include "rgop/ad/tape.hpp"
#include "rgop/codec/codec.hpp"
#include "rgop/model/config.hpp"
#include "rgop/rng.hpp"

namespace rgop::model {

// Parameter initialization. Prefixes: "fer." embedder+LSTM, "cls."
// classifier head, "idnet." identity encoder, "dec." apex decoder.
void init_fer_params(ad::ParamStore& store, const ModelConfig& cfg, Rng& rng);
void init_identity_params(ad::ParamStore& store, const ModelConfig& cfg, Rng& rng);
void init_decoder_params(ad::ParamStore& store, const ModelConfig& cfg, Rng& rng);

/// Normalized f_E input for one P-frame: residual scaled to [-1,1], plus,
/// in kResidualPlusMotion mode, the block motion field expanded to pixel
/// resolution as two extra channels scaled by 1/motion_scale. Shape [C,H,W].
ad::Tensor make_fer_input(const ResidualFrame& res, const codec::MotionField* motion,
                          const ModelConfig& cfg);

/// Identity-branch input: I-frame scaled to [0,1], shape [3,H,W].
ad::Tensor make_identity_input(const Frame& i_frame);

// ---- inference path (no tape, no gradients) ----

/// Per-frame embeddings for a stack of inputs [T,C,H,W] -> [T,embed_dim].
/// The same weights apply to every frame.
ad::Tensor embed_frames(const ad::Tensor& inputs, const ad::ParamStore& params,
                        const ModelConfig& cfg);

/// Runs the LSTM over embeddings in temporal order; returns the final
/// hidden state z_E. Empty input is an error.
ad::Tensor aggregate(const ad::Tensor& embeds, const ad::ParamStore& params,
                     const ModelConfig& cfg);

ad::Tensor classify(const ad::Tensor& z_e, const ad::ParamStore& params);

/// Frozen identity feature z_I of an I-frame.
ad::Tensor extract_identity(const Frame& i_frame, const ad::ParamStore& params,
                            const ModelConfig& cfg);

/// Dec(z_I, z_E) -> image in [0,1], shape [3,H,W].
ad::Tensor reconstruct_apex(const ad::Tensor& z_i, const ad::Tensor& z_e,
                            const ad::ParamStore& params, const ModelConfig& cfg);

// ---- training path (same architecture, recorded on a tape) ----

ad::Value embed_frames_t(ad::Tape& tape, ad::Value inputs, const ModelConfig& cfg);

/// Identity-branch features for a batch of images [B,3,H,W] -> [B,z_i_dim].
/// Used by identity pretraining; the trained encoder is frozen afterwards.
ad::Value identity_features_t(ad::Tape& tape, ad::Value images, const ModelConfig& cfg);
ad::Value aggregate_t(ad::Tape& tape, ad::Value embeds, int begin, int count,
                      const ModelConfig& cfg);
ad::Value classify_t(ad::Tape& tape, ad::Value z_e);
ad::Value reconstruct_apex_t(ad::Tape& tape, ad::Value z_i, ad::Value z_e,
                             const ModelConfig& cfg);

/// Squared Frobenius norm of the cross-covariance of standardized feature
/// batches, normalized by d_E * d_I. Nonnegative; zero iff the empirical
/// cross-covariance vanishes. Needs batch size >= 2.
ad::Value independence_penalty_t(ad::Tape& tape, ad::Value z_e_batch, ad::Value z_i_batch);

/// L = L_CE + alpha * L_dis + beta * L_1. Absent terms contribute nothing.
ad::Value total_loss_t(ad::Tape& tape, ad::Value ce, std::optional<ad::Value> dis,
                       std::optional<ad::Value> l1, const LossWeights& weights);

/// Mean absolute entry of the cross-correlation matrix between two feature
/// batches (population standardization). Evaluation metric.
double mean_abs_cross_correlation(const ad::Tensor& z_e, const ad::Tensor& z_i);

}  // namespace rgop::model
