// hydrate: command line front end for data generation, HD training and
// inference, PoT quantization, SACC checks and the NNPE report.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hydrate/classifier/evaluate.hpp"
#include "hydrate/classifier/hyde.hpp"
#include "hydrate/encoder/hydf.hpp"
#include "hydrate/harness/experiments.hpp"
#include "hydrate/hdc/hydv.hpp"
#include "hydrate/nnpe/manifest.hpp"
#include "hydrate/nnpe/report.hpp"
#include "hydrate/sacc/check.hpp"
#include "hydrate/sacc/hydp.hpp"

namespace {

using namespace hydrate;
using harness::fmt_double;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw Error("write to '" + path + "' failed");
}

void add_task_options(CLI::App* cmd, harness::SyntheticTaskSpec& spec) {
  cmd->add_option("--classes", spec.num_classes, "number of classes")->capture_default_str();
  cmd->add_option("--features", spec.features, "features per frame (K)")->capture_default_str();
  cmd->add_option("--frames", spec.frames_per_clip, "frames per clip")->capture_default_str();
  cmd->add_option("--train-clips", spec.train_clips_per_class, "training clips per class")->capture_default_str();
  cmd->add_option("--test-clips", spec.test_clips_per_class, "test clips per class")->capture_default_str();
  cmd->add_option("--sigma", spec.sigma, "per-frame jitter")->capture_default_str();
  cmd->add_option("--clip-sigma", spec.clip_sigma, "per-clip offset")->capture_default_str();
  cmd->add_option("--active-dims", spec.active_dims, "features moved per class")->capture_default_str();
  cmd->add_option("--separation", spec.separation, "class offset on active features")->capture_default_str();
}

void add_pipeline_options(CLI::App* cmd, harness::PipelineConfig& pipe, bool with_dim = true) {
  if (with_dim) cmd->add_option("--dim", pipe.dim, "hypervector dimension D")->capture_default_str();
  cmd->add_option("--levels", pipe.levels, "level hypervectors L")->capture_default_str();
  cmd->add_option("--window", pipe.window.frames, "frames per decision window")->capture_default_str();
  cmd->add_option("--stride", pipe.window.stride, "window stride")->capture_default_str();
}

/// Regroups a flat HYDV file into clips using the matching HYDF layout.
std::vector<classifier::EncodedClip> load_encoded(const std::string& hydf_path, const std::string& hydv_path) {
  const auto set = encoder::load_hydf(hydf_path);
  auto vecs = hdc::load_hydv(hydv_path);
  const std::size_t need = set.clips.size() * set.frames_per_clip;
  if (vecs.vectors.size() != need) {
    throw DataError("'" + hydv_path + "' holds " + std::to_string(vecs.vectors.size()) + " vectors, '" + hydf_path +
                    "' describes " + std::to_string(need) + " frames");
  }
  std::vector<classifier::EncodedClip> clips;
  clips.reserve(set.clips.size());
  std::size_t at = 0;
  for (const auto& c : set.clips) {
    classifier::EncodedClip e{c.label, {}};
    for (std::size_t t = 0; t < set.frames_per_clip; ++t) e.frames.push_back(std::move(vecs.vectors[at++]));
    clips.push_back(std::move(e));
  }
  return clips;
}

std::vector<double> parse_doubles(const std::vector<std::string>& xs) {
  std::vector<double> out;
  for (const auto& x : xs) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(x, &used);
    } catch (const std::exception&) {
      throw ArgumentError("not a number: '" + x + "'");
    }
    if (used != x.size()) throw ArgumentError("not a number: '" + x + "'");
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct GenData {
  harness::SyntheticTaskSpec spec;
  std::string train_out, test_out;

  void run() const {
    const auto task = harness::gen_synthetic(spec);
    encoder::save_hydf(train_out, task.train);
    encoder::save_hydf(test_out, task.test);
    std::cout << "train_clips=" << task.train.clips.size() << " test_clips=" << task.test.clips.size()
              << " frames_per_clip=" << spec.frames_per_clip << " features=" << spec.features << '\n';
  }
};

struct Encode {
  std::uint64_t seed = 0;
  harness::PipelineConfig pipe;
  std::string input, output;

  void run() const {
    const auto set = encoder::load_hydf(input);
    const harness::HdContext ctx(set.features, pipe, seed);
    std::vector<hdc::Hypervector> out;
    out.reserve(set.clips.size() * set.frames_per_clip);
    for (const auto& clip : set.clips) {
      for (auto& h : encoder::encode_sequence(clip, ctx.im, ctx.tb)) out.push_back(std::move(h));
    }
    hdc::save_hydv(output, out, pipe.dim);
    std::cout << "vectors=" << out.size() << " dim=" << pipe.dim << '\n';
  }
};

struct TrainHd {
  std::uint64_t seed = 0;
  std::string data, vectors, output;
  bool no_acc = false;
  std::optional<int> exclude;

  void run() const {
    const auto clips = load_encoded(data, vectors);
    if (clips.empty()) throw DataError("no training clips");
    std::optional<classifier::ClassId> ex;
    if (exclude) ex = static_cast<classifier::ClassId>(*exclude);
    const auto store = harness::train_store(clips, clips.front().frames.front().dim(), seed, ex);
    classifier::save_hyde(output, store, !no_acc);
    std::cout << "classes=" << store.size() << " dim=" << store.dim() << " accumulators=" << (no_acc ? 0 : 1) << '\n';
  }
};

struct Infer {
  std::uint64_t seed = 0;
  harness::PipelineConfig pipe;
  std::string model, data, vectors, csv;
  std::optional<int> held_out;

  void run() const {
    const auto store = classifier::load_hyde(model, seed);
    const auto clips = load_encoded(data, vectors);
    const auto res = classifier::evaluate(store, clips, pipe.window);
    std::cout << "clips=" << res.clips << " correct=" << res.correct << " accuracy=" << fmt_double(res.accuracy())
              << '\n';
    if (held_out) {
      const auto h = static_cast<classifier::ClassId>(*held_out);
      std::cout << "new_class_accuracy=" << fmt_double(res.accuracy_where([&](auto id) { return id == h; }))
                << " old_class_accuracy=" << fmt_double(res.accuracy_where([&](auto id) { return id != h; })) << '\n';
    }
    if (!csv.empty()) {
      std::string out = "# experiment=infer\n# model=" + model + "\n# data=" + data + "\n# vectors=" + vectors +
                        "\n# seed=" + std::to_string(seed) + "\n# window_frames=" + std::to_string(pipe.window.frames) +
                        "\n# window_stride=" + std::to_string(pipe.window.stride) + "\n";
      out += "clip,truth,predicted,windows,votes,correct\n";
      for (std::size_t i = 0; i < res.predictions.size(); ++i) {
        const auto& p = res.predictions[i];
        out += std::to_string(i) + ',' + std::to_string(p.truth) + ',' + std::to_string(p.predicted) + ',' +
               std::to_string(p.windows) + ',' + std::to_string(p.votes) + ',' + (p.truth == p.predicted ? "1" : "0") +
               '\n';
      }
      write_text(csv, out);
    }
  }
};

struct Reconfig {
  std::uint64_t seed = 0;
  std::string model, data, vectors, output;
  int cls = 0;
  std::size_t shots = 1;

  void run() const {
    auto store = classifier::load_hyde(model, seed);
    const bool had_acc = store.trainable();
    const auto clips = load_encoded(data, vectors);
    const auto id = static_cast<classifier::ClassId>(cls);
    classifier::reconfigure_add_class(store, id, harness::shots_of(clips, id, shots));
    classifier::save_hyde(output, store, had_acc);
    std::cout << "classes=" << store.size() << " added=" << cls << " shots=" << shots << '\n';
  }
};

struct Retrain {
  std::uint64_t seed = 0;
  std::string model, data, vectors, output;
  std::size_t epochs = 1;

  void run() const {
    auto store = classifier::load_hyde(model, seed);
    const auto samples = harness::labeled_frames(load_encoded(data, vectors));
    std::cout << "epoch=0 frame_error=" << fmt_double(classifier::frame_error_rate(store, samples)) << '\n';
    for (std::size_t e = 1; e <= epochs; ++e) {
      const auto mismatches = classifier::retrain_epoch(store, samples);
      std::cout << "epoch=" << e << " mismatch_count=" << mismatches
                << " frame_error=" << fmt_double(classifier::frame_error_rate(store, samples)) << '\n';
    }
    classifier::save_hyde(output, store, true);
  }
};

struct Sweep {
  harness::SyntheticTaskSpec spec;
  harness::PipelineConfig pipe;
  std::optional<std::uint64_t> hd_seed;
  std::size_t trials = 20;
  std::string csv;

  harness::PipelineConfig pipeline() const {
    auto p = pipe;
    p.hd_seed = hd_seed.value_or(spec.seed);
    return p;
  }

  void emit(const harness::RunReport& r) const {
    const auto text = r.to_csv();
    if (csv.empty()) {
      std::cout << text;
    } else {
      write_text(csv, text);
      std::cout << "wrote " << csv << " (" << r.rows.size() << " rows)\n";
    }
  }
};

struct Quantize {
  std::optional<std::uint64_t> seed;
  std::string input, output;
  bool synthetic = false;
  int e_min = -8, e_max = -1;
  std::optional<double> zero_threshold;

  void run() const {
    std::vector<sacc::PoTTensor> tensors;
    if (synthetic == !input.empty()) throw ArgumentError("give exactly one of --input or --synthetic");
    if (synthetic) {
      if (!seed) throw ArgumentError("--synthetic needs --seed");
      // A small conv + dense model with Gaussian weights.
      const std::vector<std::pair<std::string, std::vector<std::size_t>>> shapes = {
          {"conv1", {16, 3, 3, 3}}, {"conv2", {32, 3, 3, 16}}, {"fc", {10, 512}}};
      SplitMix64 rng(derive_seed({*seed, 0x7175616E74ull}));
      for (const auto& [name, shape] : shapes) {
        std::size_t n = 1;
        for (auto d : shape) n *= d;
        std::vector<double> w(n);
        const double s = 1.0 / std::sqrt(static_cast<double>(n / shape[0]));
        for (auto& v : w) v = s * rng.normal();
        tensors.push_back(sacc::quantize_pot(w, shape, e_min, e_max, zero_threshold, name));
      }
    } else {
      const auto bytes = io::read_file(input);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(bytes.begin(), bytes.end());
      } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("weights JSON: ") + e.what(), e.byte);
      }
      if (!j.contains("tensors") || !j["tensors"].is_array()) throw DataError("weights JSON needs a 'tensors' array");
      for (const auto& t : j["tensors"]) {
        try {
          const auto name = t.at("name").get<std::string>();
          const auto shape = t.at("shape").get<std::vector<std::size_t>>();
          const auto values = t.at("values").get<std::vector<double>>();
          tensors.push_back(sacc::quantize_pot(values, shape, e_min, e_max, zero_threshold, name));
        } catch (const nlohmann::json::exception& e) {
          throw DataError(std::string("weights JSON: ") + e.what());
        }
      }
    }
    sacc::save_hydp(output, tensors);
    std::size_t zeros = 0, total = 0;
    for (const auto& t : tensors) {
      for (const auto& c : t.codes()) zeros += c.zero;
      total += t.size();
    }
    std::cout << "tensors=" << tensors.size() << " weights=" << total << " zeros=" << zeros
              << " avg_bits=" << fmt_double(sacc::avg_bits(tensors)) << '\n';
  }
};

struct SaccCheck {
  std::uint64_t seed = 0;
  std::string kernel = "dot";
  std::size_t trials = 1000;

  int run() const {
    const auto r = sacc::sacc_check(sacc::parse_check_kernel(kernel), trials, seed);
    std::cout << "kernel=" << kernel << " trials=" << r.trials << " outputs=" << r.outputs_compared
              << " mismatches=" << r.mismatches << (r.first_failure ? " first=" + *r.first_failure : "") << '\n';
    return r.ok() ? 0 : 1;
  }
};

struct NnpeReport {
  std::string manifest, csv, latency_csv, dump_manifest;
  bool builtin = false;
  nnpe::NNPEConfig cfg;
  double clock_mhz = 187.5;
  double bandwidth_gbps = 153.6;
  std::string policy = "two_buffer";
  bool no_overlap = false;

  void run() {
    cfg.clock_hz = clock_mhz * 1e6;
    cfg.bandwidth_bits_per_s = bandwidth_gbps * 1e9;
    cfg.policy = nnpe::parse_policy(policy);
    cfg.overlap_recurrent = !no_overlap;
    if (builtin == !manifest.empty()) throw ArgumentError("give exactly one of --manifest or --builtin");
    const auto layers = builtin ? nnpe::resnet50_lstm_manifest() : nnpe::load_manifest(manifest);
    if (!dump_manifest.empty()) write_text(dump_manifest, nnpe::format_manifest(layers));
    const auto r = nnpe::compare(layers, cfg);
    std::cout << nnpe::summary_text(r);
    if (!csv.empty()) write_text(csv, nnpe::traffic_csv(r));
    if (!latency_csv.empty()) write_text(latency_csv, nnpe::latency_csv(layers, r.latency));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hydrate: HD video classification, PoT/SACC inference and NNPE modelling"};
  app.require_subcommand(1);
  int status = 0;

  GenData gen;
  auto* c_gen = app.add_subcommand("gen-data", "generate a synthetic train/test feature set (HYDF)");
  c_gen->add_option("--seed", gen.spec.seed, "task seed")->required();
  c_gen->add_option("--train", gen.train_out, "training HYDF output")->required();
  c_gen->add_option("--test", gen.test_out, "test HYDF output")->required();
  add_task_options(c_gen, gen.spec);
  c_gen->callback([&] { gen.run(); });

  Encode enc;
  auto* c_enc = app.add_subcommand("encode", "encode a HYDF feature set into frame hypervectors (HYDV)");
  c_enc->add_option("--seed", enc.seed, "item memory seed")->required();
  c_enc->add_option("--input", enc.input, "HYDF input")->required();
  c_enc->add_option("--out", enc.output, "HYDV output")->required();
  c_enc->add_option("--dim", enc.pipe.dim, "hypervector dimension D")->capture_default_str();
  c_enc->add_option("--levels", enc.pipe.levels, "level hypervectors L")->capture_default_str();
  c_enc->callback([&] { enc.run(); });

  TrainHd tr;
  auto* c_tr = app.add_subcommand("train-hd", "bundle class exemplars (HYDE)");
  c_tr->add_option("--seed", tr.seed, "tie-break seed")->required();
  c_tr->add_option("--data", tr.data, "HYDF with labels")->required();
  c_tr->add_option("--vectors", tr.vectors, "HYDV of the same set")->required();
  c_tr->add_option("--out", tr.output, "HYDE output")->required();
  c_tr->add_flag("--no-acc", tr.no_acc, "omit accumulators (inference-only model)");
  c_tr->add_option("--exclude-class", tr.exclude, "leave one class out of training");
  c_tr->callback([&] { tr.run(); });

  Infer inf;
  auto* c_inf = app.add_subcommand("infer", "classify clips with sliding windows");
  c_inf->add_option("--seed", inf.seed, "tie-break seed the model was trained with")->required();
  c_inf->add_option("--model", inf.model, "HYDE model")->required();
  c_inf->add_option("--data", inf.data, "HYDF with labels")->required();
  c_inf->add_option("--vectors", inf.vectors, "HYDV of the same set")->required();
  c_inf->add_option("--csv", inf.csv, "per-clip prediction CSV");
  c_inf->add_option("--held-out", inf.held_out, "also report accuracy split by this class");
  add_pipeline_options(c_inf, inf.pipe, false);
  c_inf->callback([&] { inf.run(); });

  Reconfig rc;
  auto* c_rc = app.add_subcommand("reconfig", "add a class from k shot clips");
  c_rc->add_option("--seed", rc.seed, "tie-break seed")->required();
  c_rc->add_option("--model", rc.model, "HYDE input")->required();
  c_rc->add_option("--data", rc.data, "HYDF holding the shot clips")->required();
  c_rc->add_option("--vectors", rc.vectors, "HYDV of the same set")->required();
  c_rc->add_option("--class", rc.cls, "class id to add")->required();
  c_rc->add_option("--shots", rc.shots, "number of clips (first k of the class)")->capture_default_str();
  c_rc->add_option("--out", rc.output, "HYDE output")->required();
  c_rc->callback([&] { rc.run(); });

  Retrain rt;
  auto* c_rt = app.add_subcommand("retrain", "perceptron-style exemplar refinement");
  c_rt->add_option("--seed", rt.seed, "tie-break seed")->required();
  c_rt->add_option("--model", rt.model, "HYDE input (with accumulators)")->required();
  c_rt->add_option("--data", rt.data, "HYDF with labels")->required();
  c_rt->add_option("--vectors", rt.vectors, "HYDV of the same set")->required();
  c_rt->add_option("--epochs", rt.epochs, "passes over the data")->capture_default_str();
  c_rt->add_option("--out", rt.output, "HYDE output")->required();
  c_rt->callback([&] { rt.run(); });

  const auto add_sweep = [&](const char* name, const char* help, Sweep& s) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--seed", s.spec.seed, "task seed of trial 0")->required();
    cmd->add_option("--hd-seed", s.hd_seed, "HD seed of trial 0 (default: --seed)");
    cmd->add_option("--trials", s.trials, "trials per point")->capture_default_str();
    cmd->add_option("--csv", s.csv, "report CSV (default: stdout)");
    add_task_options(cmd, s.spec);
    return cmd;
  };

  Sweep sw_dim;
  std::vector<std::size_t> dims = {256, 512, 1024, 2048, 4096, 8192};
  auto* c_sd = add_sweep("sweep-dim", "accuracy versus hypervector dimension", sw_dim);
  c_sd->add_option("--dims", dims, "comma-separated D values")->delimiter(',')->capture_default_str();
  add_pipeline_options(c_sd, sw_dim.pipe, false);
  c_sd->callback([&] { sw_dim.emit(harness::sweep_dim(sw_dim.spec, sw_dim.pipeline(), dims, sw_dim.trials)); });

  Sweep sw_noise;
  std::vector<std::string> snrs = {"inf", "60", "50", "40", "30", "20", "10", "5", "0"};
  std::optional<std::uint64_t> noise_seed;
  auto* c_sn = add_sweep("sweep-noise", "accuracy versus feature SNR", sw_noise);
  c_sn->add_option("--snr", snrs, "comma-separated SNR values in dB (inf = clean)")->delimiter(',');
  c_sn->add_option("--noise-seed", noise_seed, "noise seed (default: --seed)");
  add_pipeline_options(c_sn, sw_noise.pipe);
  c_sn->callback([&] {
    sw_noise.emit(harness::sweep_noise(sw_noise.spec, sw_noise.pipeline(), parse_doubles(snrs), sw_noise.trials,
                                       noise_seed.value_or(sw_noise.spec.seed)));
  });

  Sweep sw_flip;
  std::vector<std::string> ps = {"0", "0.1", "0.2", "0.3", "0.4", "0.45"};
  std::optional<std::uint64_t> flip_seed;
  auto* c_sb = add_sweep("sweep-bitflip", "accuracy versus query bit-flip rate", sw_flip);
  c_sb->add_option("--p", ps, "comma-separated flip fractions")->delimiter(',');
  c_sb->add_option("--flip-seed", flip_seed, "flip seed (default: --seed)");
  add_pipeline_options(c_sb, sw_flip.pipe);
  c_sb->callback([&] {
    sw_flip.emit(harness::sweep_bitflip(sw_flip.spec, sw_flip.pipeline(), parse_doubles(ps), sw_flip.trials,
                                        flip_seed.value_or(sw_flip.spec.seed)));
  });

  Sweep sw_k;
  std::vector<std::size_t> ks = {1, 5, 25};
  int held_out = 0;
  auto* c_sk = add_sweep("sweep-kshot", "new/old class accuracy versus shots", sw_k);
  c_sk->add_option("--k", ks, "comma-separated shot counts (clips)")->delimiter(',')->capture_default_str();
  c_sk->add_option("--held-out", held_out, "class left out of base training")->capture_default_str();
  add_pipeline_options(c_sk, sw_k.pipe);
  c_sk->callback([&] {
    sw_k.emit(harness::sweep_kshot(sw_k.spec, sw_k.pipeline(), static_cast<classifier::ClassId>(held_out), ks,
                                   sw_k.trials));
  });

  Quantize q;
  auto* c_q = app.add_subcommand("quantize", "nearest power-of-two weight quantization (HYDP)");
  c_q->add_option("--input", q.input, "weights JSON {\"tensors\":[{name, shape, values}]}");
  c_q->add_flag("--synthetic", q.synthetic, "quantize a seeded Gaussian demo model instead");
  c_q->add_option("--seed", q.seed, "seed for --synthetic");
  c_q->add_option("--emin", q.e_min, "smallest exponent")->capture_default_str();
  c_q->add_option("--emax", q.e_max, "largest exponent")->capture_default_str();
  c_q->add_option("--zero-threshold", q.zero_threshold, "|w| below this becomes zero (default 2^(emin-1))");
  c_q->add_option("--out", q.output, "HYDP output")->required();
  c_q->callback([&] { q.run(); });

  SaccCheck sc;
  auto* c_sc = app.add_subcommand("sacc-check", "compare SACC kernels with a MAC oracle on random instances");
  c_sc->add_option("--seed", sc.seed, "instance seed")->required();
  c_sc->add_option("--kernel", sc.kernel, "dot | conv | dense | lstm")->capture_default_str();
  c_sc->add_option("--trials", sc.trials, "random instances")->capture_default_str();
  c_sc->callback([&] { status = sc.run(); });

  NnpeReport nr;
  auto* c_nr = app.add_subcommand("nnpe-report", "NNPE traffic and latency model");
  c_nr->add_option("--manifest", nr.manifest, "layer manifest file");
  c_nr->add_flag("--builtin", nr.builtin, "use the built-in ResNet-50 + LSTM manifest");
  c_nr->add_option("--dump-manifest", nr.dump_manifest, "write the manifest in use to this file");
  c_nr->add_option("--s", nr.cfg.arrays, "SACC arrays (S)")->capture_default_str();
  c_nr->add_option("--n", nr.cfg.lanes, "lanes per array (N)")->capture_default_str();
  c_nr->add_option("--clock-mhz", nr.clock_mhz, "processing clock")->capture_default_str();
  c_nr->add_option("--weight-bits", nr.cfg.weight_bits, "SACC weight width")->capture_default_str();
  c_nr->add_option("--act-bits", nr.cfg.act_bits, "activation width")->capture_default_str();
  c_nr->add_option("--image-bits", nr.cfg.image_bits, "input image width")->capture_default_str();
  c_nr->add_option("--policy", nr.policy, "none | two_buffer | three_buffer")->capture_default_str();
  c_nr->add_option("--buffer-bits", nr.cfg.buffer_capacity_bits, "capacity of one data buffer")->capture_default_str();
  c_nr->add_option("--bandwidth-gbps", nr.bandwidth_gbps, "external memory bandwidth, Gbit/s")->capture_default_str();
  c_nr->add_option("--dma-efficiency", nr.cfg.dma_efficiency, "fraction of bandwidth achieved")->capture_default_str();
  c_nr->add_option("--overhead-cycles", nr.cfg.layer_overhead_cycles, "fixed cycles per layer")->capture_default_str();
  c_nr->add_option("--lstm-steps", nr.cfg.recurrent_steps, "recurrent steps per clip")->capture_default_str();
  c_nr->add_flag("--no-overlap", nr.no_overlap, "run recurrent steps after the feature stack");
  c_nr->add_option("--csv", nr.csv, "per-category traffic CSV");
  c_nr->add_option("--latency-csv", nr.latency_csv, "per-layer latency CSV");
  c_nr->callback([&] { nr.run(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const hydrate::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 3;
  } catch (const hydrate::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return status;
}
