#include "rgop/model/network.hpp"

#include <cmath>

#include "rgop/ad/kernels.hpp"
#include "rgop/errors.hpp"
#include "rgop/instrument.hpp"

namespace rgop::model {

namespace k = ad::kernels;
using ad::Tensor;
using ad::Value;

namespace {

void fill_uniform(Tensor& t, Rng& rng, double limit) {
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-limit, limit);
}

// He-uniform for layers feeding a ReLU, Glorot-uniform elsewhere.
Tensor he_uniform(std::vector<int> shape, int fan_in, Rng& rng) {
  Tensor t(std::move(shape));
  fill_uniform(t, rng, std::sqrt(6.0 / fan_in));
  return t;
}

Tensor glorot_uniform(std::vector<int> shape, int fan_in, int fan_out, Rng& rng) {
  Tensor t(std::move(shape));
  fill_uniform(t, rng, std::sqrt(6.0 / (fan_in + fan_out)));
  return t;
}

void init_conv_stack(ad::ParamStore& store, const std::string& prefix,
                     const std::vector<ConvSpec>& plan, int in_channels, Rng& rng) {
  int ci = in_channels;
  for (std::size_t l = 0; l < plan.size(); ++l) {
    const auto& s = plan[l];
    const std::string base = prefix + "conv" + std::to_string(l) + ".";
    store.add(base + "w", he_uniform({s.out_channels, ci, s.kernel, s.kernel},
                                     ci * s.kernel * s.kernel, rng));
    store.add(base + "b", Tensor({s.out_channels}));
    ci = s.out_channels;
  }
}

struct DecoderDims {
  int bh, bw;            // base map size after the fc
  int ch0, ch1, ch2;     // channels at the three conv stages
};

DecoderDims decoder_dims(const ModelConfig& cfg) {
  auto halve = [](int size, int kernel) { return (size + kernel - 1) / 2; };
  DecoderDims d;
  d.bh = halve(halve(halve(cfg.frame_height, 5), 3), 3);
  d.bw = halve(halve(halve(cfg.frame_width, 5), 3), 3);
  d.ch0 = cfg.decoder_base_ch;
  d.ch1 = std::max(1, cfg.decoder_base_ch / 2);
  d.ch2 = std::max(1, cfg.decoder_base_ch / 4);
  return d;
}

}  // namespace

void init_fer_params(ad::ParamStore& store, const ModelConfig& cfg, Rng& rng) {
  cfg.validate();
  init_conv_stack(store, "fer.", cfg.fer_conv, cfg.input_channels(), rng);
  const int feat = cfg.fer_conv.back().out_channels;
  store.add("fer.fc.w", glorot_uniform({cfg.embed_dim, feat}, feat, cfg.embed_dim, rng));
  store.add("fer.fc.b", Tensor({cfg.embed_dim}));

  const int hidden = cfg.z_e_dim;
  store.add("fer.lstm.wx",
            glorot_uniform({4 * hidden, cfg.embed_dim}, cfg.embed_dim, hidden, rng));
  store.add("fer.lstm.wh", glorot_uniform({4 * hidden, hidden}, hidden, hidden, rng));
  Tensor lstm_b({4 * hidden});
  for (int j = 0; j < hidden; ++j) lstm_b[static_cast<std::size_t>(hidden + j)] = 1.0;  // forget gate bias
  store.add("fer.lstm.b", std::move(lstm_b));

  store.add("cls.w", glorot_uniform({cfg.class_count, hidden}, hidden, cfg.class_count, rng));
  store.add("cls.b", Tensor({cfg.class_count}));
}

void init_identity_params(ad::ParamStore& store, const ModelConfig& cfg, Rng& rng) {
  init_conv_stack(store, "idnet.", cfg.id_conv, 3, rng);
  const int feat = cfg.id_conv.back().out_channels;
  store.add("idnet.fc.w", glorot_uniform({cfg.z_i_dim, feat}, feat, cfg.z_i_dim, rng));
  store.add("idnet.fc.b", Tensor({cfg.z_i_dim}));
}

void init_decoder_params(ad::ParamStore& store, const ModelConfig& cfg, Rng& rng) {
  const DecoderDims d = decoder_dims(cfg);
  const int zdim = cfg.z_i_dim + cfg.z_e_dim;
  const int map = d.ch0 * d.bh * d.bw;
  store.add("dec.fc.w", he_uniform({map, zdim}, zdim, rng));
  store.add("dec.fc.b", Tensor({map}));
  store.add("dec.conv0.w", he_uniform({d.ch1, d.ch0, 3, 3}, d.ch0 * 9, rng));
  store.add("dec.conv0.b", Tensor({d.ch1}));
  store.add("dec.conv1.w", he_uniform({d.ch2, d.ch1, 3, 3}, d.ch1 * 9, rng));
  store.add("dec.conv1.b", Tensor({d.ch2}));
  store.add("dec.conv2.w",
            glorot_uniform({3, d.ch2, 5, 5}, d.ch2 * 25, 3 * 25, rng));
  store.add("dec.conv2.b", Tensor({3}));
}

Tensor make_fer_input(const ResidualFrame& res, const codec::MotionField* motion,
                      const ModelConfig& cfg) {
  if (res.height() != cfg.frame_height || res.width() != cfg.frame_width)
    throw DimensionError("residual shape does not match model config");
  const bool with_motion = cfg.input_mode == InputMode::kResidualPlusMotion;
  if (with_motion && motion == nullptr)
    throw ConfigError("input mode requires a motion field");
  if (!with_motion && motion != nullptr)
    throw ConfigError("motion field supplied but input mode is residual_only");

  const int h = res.height(), w = res.width();
  Tensor x({cfg.input_channels(), h, w});
  const double inv = 1.0 / 255.0;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx)
        x[(static_cast<std::size_t>(c) * h + y) * w + xx] = res.at(y, xx, c) * inv;

  if (with_motion) {
    const int bs = motion->block_size();
    if (motion->grid_h() * bs != h || motion->grid_w() * bs != w)
      throw DimensionError("motion grid does not match frame shape");
    const double scale = 1.0 / cfg.motion_scale;
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) {
        const int by = y / bs, bx = xx / bs;
        x[(static_cast<std::size_t>(3) * h + y) * w + xx] = motion->dy(by, bx) * scale;
        x[(static_cast<std::size_t>(4) * h + y) * w + xx] = motion->dx(by, bx) * scale;
      }
  }
  return x;
}

Tensor make_identity_input(const Frame& i_frame) {
  const int h = i_frame.height(), w = i_frame.width();
  Tensor x({3, h, w});
  const double inv = 1.0 / 255.0;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx)
        x[(static_cast<std::size_t>(c) * h + y) * w + xx] = i_frame.at(y, xx, c) * inv;
  return x;
}

// ---------------------------------------------------------------------------
// Inference path. Mirrors the tape builders below; test_model asserts the
// two paths produce identical numbers.
// ---------------------------------------------------------------------------

Tensor embed_frames(const Tensor& inputs, const ad::ParamStore& params,
                    const ModelConfig& cfg) {
  if (inputs.ndim() != 4) throw DimensionError("embed_frames expects [T,C,H,W]");
  if (inputs.dim(1) != cfg.input_channels())
    throw ConfigError("input channel count does not match input mode");
  Tensor cur = inputs;
  for (std::size_t l = 0; l < cfg.fer_conv.size(); ++l) {
    const std::string base = "fer.conv" + std::to_string(l) + ".";
    cur = k::conv2d_forward(cur, params.at(base + "w"), params.at(base + "b"),
                            cfg.fer_conv[l].stride);
    cur = k::relu_forward(cur);
  }
  cur = k::mean_pool_hw_forward(cur);
  return k::linear_forward(cur, params.at("fer.fc.w"), params.at("fer.fc.b"));
}

Tensor aggregate(const Tensor& embeds, const ad::ParamStore& params, const ModelConfig& cfg) {
  if (embeds.ndim() != 2) throw DimensionError("aggregate expects [T, embed_dim]");
  const int t_count = embeds.dim(0);
  if (t_count < 1) throw ArgumentError("aggregate: empty sequence");
  const int hidden = cfg.z_e_dim;
  Tensor h({hidden}), c({hidden});
  const Tensor& wx = params.at("fer.lstm.wx");
  const Tensor& wh = params.at("fer.lstm.wh");
  const Tensor& b = params.at("fer.lstm.b");
  for (int t = 0; t < t_count; ++t) {
    Tensor x({embeds.dim(1)},
             std::vector<double>(embeds.data() + static_cast<std::size_t>(t) * embeds.dim(1),
                                 embeds.data() + static_cast<std::size_t>(t + 1) * embeds.dim(1)));
    Tensor h_new, c_new;
    k::LstmSaved saved;
    k::lstm_cell_forward(x, h, c, wx, wh, b, &h_new, &c_new, &saved);
    h = std::move(h_new);
    c = std::move(c_new);
  }
  return h;
}

Tensor classify(const Tensor& z_e, const ad::ParamStore& params) {
  return k::linear_forward(z_e, params.at("cls.w"), params.at("cls.b"));
}

Tensor extract_identity(const Frame& i_frame, const ad::ParamStore& params,
                        const ModelConfig& cfg) {
  instrument::extract_identity_calls().fetch_add(1, std::memory_order_relaxed);
  if (i_frame.height() != cfg.frame_height || i_frame.width() != cfg.frame_width)
    throw DimensionError("I-frame shape does not match model config");
  Tensor x = make_identity_input(i_frame);
  Tensor cur({1, 3, cfg.frame_height, cfg.frame_width},
             std::vector<double>(x.data(), x.data() + x.size()));
  for (std::size_t l = 0; l < cfg.id_conv.size(); ++l) {
    const std::string base = "idnet.conv" + std::to_string(l) + ".";
    cur = k::conv2d_forward(cur, params.at(base + "w"), params.at(base + "b"),
                            cfg.id_conv[l].stride);
    cur = k::relu_forward(cur);
  }
  cur = k::mean_pool_hw_forward(cur);
  Tensor z = k::linear_forward(cur, params.at("idnet.fc.w"), params.at("idnet.fc.b"));
  return Tensor({cfg.z_i_dim}, std::vector<double>(z.data(), z.data() + z.size()));
}

Tensor reconstruct_apex(const Tensor& z_i, const Tensor& z_e, const ad::ParamStore& params,
                        const ModelConfig& cfg) {
  instrument::reconstruct_apex_calls().fetch_add(1, std::memory_order_relaxed);
  const DecoderDims d = decoder_dims(cfg);
  Tensor z({z_i.dim(0) + z_e.dim(0)});
  std::copy(z_i.data(), z_i.data() + z_i.size(), z.data());
  std::copy(z_e.data(), z_e.data() + z_e.size(), z.data() + z_i.size());

  Tensor cur = k::relu_forward(k::linear_forward(z, params.at("dec.fc.w"), params.at("dec.fc.b")));
  cur = Tensor({1, d.ch0, d.bh, d.bw}, std::vector<double>(cur.data(), cur.data() + cur.size()));
  cur = k::upsample2x_forward(cur);
  cur = k::relu_forward(k::conv2d_forward(cur, params.at("dec.conv0.w"), params.at("dec.conv0.b"), 1));
  cur = k::upsample2x_forward(cur);
  cur = k::relu_forward(k::conv2d_forward(cur, params.at("dec.conv1.w"), params.at("dec.conv1.b"), 1));
  cur = k::upsample2x_forward(cur);
  cur = k::sigmoid_forward(k::conv2d_forward(cur, params.at("dec.conv2.w"), params.at("dec.conv2.b"), 1));
  return Tensor({3, cfg.frame_height, cfg.frame_width},
                std::vector<double>(cur.data(), cur.data() + cur.size()));
}

// ---------------------------------------------------------------------------
// Tape path.
// ---------------------------------------------------------------------------

Value embed_frames_t(ad::Tape& tape, Value inputs, const ModelConfig& cfg) {
  Value cur = inputs;
  for (std::size_t l = 0; l < cfg.fer_conv.size(); ++l) {
    const std::string base = "fer.conv" + std::to_string(l) + ".";
    cur = tape.relu(tape.conv2d(cur, tape.param(base + "w"), tape.param(base + "b"),
                                cfg.fer_conv[l].stride));
  }
  cur = tape.mean_pool_hw(cur);
  return tape.linear(cur, tape.param("fer.fc.w"), tape.param("fer.fc.b"));
}

Value identity_features_t(ad::Tape& tape, Value images, const ModelConfig& cfg) {
  Value cur = images;
  for (std::size_t l = 0; l < cfg.id_conv.size(); ++l) {
    const std::string base = "idnet.conv" + std::to_string(l) + ".";
    cur = tape.relu(tape.conv2d(cur, tape.param(base + "w"), tape.param(base + "b"),
                                cfg.id_conv[l].stride));
  }
  cur = tape.mean_pool_hw(cur);
  return tape.linear(cur, tape.param("idnet.fc.w"), tape.param("idnet.fc.b"));
}

Value aggregate_t(ad::Tape& tape, Value embeds, int begin, int count, const ModelConfig& cfg) {
  if (count < 1) throw ArgumentError("aggregate: empty sequence");
  const int hidden = cfg.z_e_dim;
  Value h = tape.input(Tensor({hidden}));
  Value c = tape.input(Tensor({hidden}));
  const Value wx = tape.param("fer.lstm.wx");
  const Value wh = tape.param("fer.lstm.wh");
  const Value b = tape.param("fer.lstm.b");
  for (int t = 0; t < count; ++t) {
    const Value x = tape.row(embeds, begin + t);
    auto [h_new, c_new] = tape.lstm_cell(x, h, c, wx, wh, b);
    h = h_new;
    c = c_new;
  }
  return h;
}

Value classify_t(ad::Tape& tape, Value z_e) {
  return tape.linear(z_e, tape.param("cls.w"), tape.param("cls.b"));
}

Value reconstruct_apex_t(ad::Tape& tape, Value z_i, Value z_e, const ModelConfig& cfg) {
  instrument::reconstruct_apex_calls().fetch_add(1, std::memory_order_relaxed);
  const DecoderDims d = decoder_dims(cfg);
  Value z = tape.concat(z_i, z_e, 0);
  Value cur = tape.relu(tape.linear(z, tape.param("dec.fc.w"), tape.param("dec.fc.b")));
  cur = tape.reshape(cur, {1, d.ch0, d.bh, d.bw});
  cur = tape.upsample2x(cur);
  cur = tape.relu(tape.conv2d(cur, tape.param("dec.conv0.w"), tape.param("dec.conv0.b"), 1));
  cur = tape.upsample2x(cur);
  cur = tape.relu(tape.conv2d(cur, tape.param("dec.conv1.w"), tape.param("dec.conv1.b"), 1));
  cur = tape.upsample2x(cur);
  cur = tape.sigmoid(tape.conv2d(cur, tape.param("dec.conv2.w"), tape.param("dec.conv2.b"), 1));
  return tape.reshape(cur, {3, cfg.frame_height, cfg.frame_width});
}

Value independence_penalty_t(ad::Tape& tape, Value z_e_batch, Value z_i_batch) {
  const Tensor& ze = tape.val(z_e_batch);
  const Tensor& zi = tape.val(z_i_batch);
  if (ze.ndim() != 2 || zi.ndim() != 2 || ze.dim(0) != zi.dim(0))
    throw DimensionError("independence penalty expects [N,dE] and [N,dI]");
  if (ze.dim(0) < 2) throw ArgumentError("independence penalty needs a batch of >= 2");
  const int n = ze.dim(0);
  const int de = ze.dim(1);
  const int di = zi.dim(1);
  const Value ze_std = tape.standardize_columns(z_e_batch, 1e-5);
  const Value zi_std = tape.standardize_columns(z_i_batch, 1e-5);
  const Value cross = tape.scale(tape.matmul_tn(ze_std, zi_std), 1.0 / n);
  return tape.scale(tape.square_sum(cross), 1.0 / (static_cast<double>(de) * di));
}

Value total_loss_t(ad::Tape& tape, Value ce, std::optional<Value> dis, std::optional<Value> l1,
                   const LossWeights& weights) {
  weights.validate();
  std::vector<std::pair<double, Value>> terms{{1.0, ce}};
  if (dis) terms.emplace_back(weights.alpha, *dis);
  if (l1) terms.emplace_back(weights.beta, *l1);
  return tape.weighted_sum(terms);
}

double mean_abs_cross_correlation(const Tensor& z_e, const Tensor& z_i) {
  if (z_e.ndim() != 2 || z_i.ndim() != 2 || z_e.dim(0) != z_i.dim(0))
    throw DimensionError("cross correlation expects [N,dE] and [N,dI]");
  const int n = z_e.dim(0);
  if (n < 2) throw ArgumentError("cross correlation needs at least 2 rows");

  auto standardize = [n](const Tensor& x) {
    const int d = x.dim(1);
    Tensor y({n, d});
    for (int j = 0; j < d; ++j) {
      double mean = 0.0;
      for (int r = 0; r < n; ++r) mean += x[static_cast<std::size_t>(r) * d + j];
      mean /= n;
      double var = 0.0;
      for (int r = 0; r < n; ++r) {
        const double c = x[static_cast<std::size_t>(r) * d + j] - mean;
        var += c * c;
      }
      var /= n;
      if (var < 1e-30) continue;  // constant dimension: no correlation
      const double inv_s = 1.0 / std::sqrt(var);
      for (int r = 0; r < n; ++r)
        y[static_cast<std::size_t>(r) * d + j] = (x[static_cast<std::size_t>(r) * d + j] - mean) * inv_s;
    }
    return y;
  };

  const Tensor ze = standardize(z_e);
  const Tensor zi = standardize(z_i);
  const Tensor cross = k::matmul_tn(ze, zi);
  double acc = 0.0;
  for (std::size_t i = 0; i < cross.size(); ++i) acc += std::abs(cross[i] / n);
  return acc / static_cast<double>(cross.size());
}

}  // namespace rgop::model
