// Copyright 2026 The axnas Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "axnas/errors.hpp"
#include "axnas/experiment/augment.hpp"
#include "axnas/experiment/config.hpp"
#include "axnas/experiment/dataset.hpp"
#include "axnas/experiment/energy.hpp"
#include "axnas/experiment/macs.hpp"
#include "axnas/experiment/pipeline.hpp"
#include "axnas/experiment/toml.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

namespace axnas::experiment {
namespace {

namespace fs = std::filesystem;
using testing::random_tensor;

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "axnas_test_experiment" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void put_be32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) b.push_back(static_cast<unsigned char>(v >> s));
}

// ---- TOML and config ----

TEST(Toml, TablesValuesAndArrays) {
  const auto j = parse_toml(
      "# comment\n"
      "name = \"desk\"  # trailing\n"
      "[search]\n"
      "epochs = 10\n"
      "lr = 3e-3\n"
      "flag = true\n"
      "[search.w_opt]\n"
      "lr0 = 0.05\n"
      "list = [1, 2, 3]\n");
  EXPECT_EQ(j["name"], "desk");
  EXPECT_EQ(j["search"]["epochs"], 10);
  EXPECT_DOUBLE_EQ(j["search"]["lr"].get<double>(), 3e-3);
  EXPECT_EQ(j["search"]["flag"], true);
  EXPECT_DOUBLE_EQ(j["search"]["w_opt"]["lr0"].get<double>(), 0.05);
  EXPECT_EQ(j["search"]["w_opt"]["list"].size(), 3u);
}

TEST(Toml, ErrorsNameTheLine) {
  try {
    parse_toml("a = 1\nb = \n", "cfg.toml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg.toml:2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_toml("[open\n"), ConfigError);
  EXPECT_THROW(parse_toml("a = 1\na = 2\n"), ConfigError);
}

TEST(Config, DeskPresetValues) {
  const auto rc = load_run_config("desk");
  EXPECT_EQ(rc.dataset.kind, "synthetic");
  EXPECT_EQ(rc.dataset.num_classes, 3);
  EXPECT_EQ(rc.dataset.image_size, 16);
  EXPECT_EQ(rc.search.cells, 4);
  EXPECT_EQ(rc.search.intermediate_nodes, 3);
  EXPECT_EQ(rc.search.init_channels, 8);
  EXPECT_EQ(rc.search.epochs, 10);
  EXPECT_EQ(rc.eval.epochs, 30);
  EXPECT_TRUE(std::holds_alternative<Fp32Exact>(rc.search.mode));
}

TEST(Config, PaperPresetValues) {
  const auto rc = load_run_config("paper");
  EXPECT_EQ(rc.search.cells, 8);
  EXPECT_EQ(rc.search.intermediate_nodes, 4);
  EXPECT_EQ(rc.search.epochs, 50);
  EXPECT_EQ(rc.search.warmup_epochs, 15);
  EXPECT_EQ(rc.search.batch_size, 512);
  EXPECT_DOUBLE_EQ(rc.search.w_opt.lr0, 0.1);
  EXPECT_DOUBLE_EQ(rc.search.a_opt.lr, 1e-4);
  EXPECT_DOUBLE_EQ(rc.search.a_opt.beta1, 0.5);
  EXPECT_EQ(rc.eval.cells, 20);
  EXPECT_EQ(rc.eval.epochs, 600);
  EXPECT_EQ(rc.eval.cutout_size, 16);
  EXPECT_DOUBLE_EQ(rc.eval.drop_path_prob, 0.3);
  EXPECT_DOUBLE_EQ(rc.eval.aux_weight, 0.4);
  EXPECT_DOUBLE_EQ(rc.eval.w_opt.lr0, 0.025);
  EXPECT_DOUBLE_EQ(rc.fp32_factor, 18.5);
}

TEST(Config, PrecedenceFlagOverFileOverPreset) {
  const auto dir = temp_dir("cfg");
  const auto path = dir / "run.toml";
  {
    std::ofstream out(path);
    out << "preset = \"desk\"\n[search]\nepochs = 6\nseed = 4\n";
  }
  auto rc = load_run_config(path.string());
  EXPECT_EQ(rc.search.epochs, 6);
  EXPECT_EQ(rc.search.seed, 4u);
  EXPECT_EQ(rc.search.cells, 4);  // from the preset
  rc = load_run_config(path.string(), {{"search", {{"seed", 9}, {"multiplier", "trunc_2"}}}});
  EXPECT_EQ(rc.search.seed, 9u);
  EXPECT_TRUE(is_quant8(rc.search.mode));
}

TEST(Config, ErrorsNameTheKey) {
  const auto dir = temp_dir("cfg_err");
  auto expect_key = [&](const std::string& body, const std::string& key) {
    const auto path = dir / "bad.toml";
    {
      std::ofstream out(path);
      out << body;
    }
    try {
      load_run_config(path.string());
      FAIL() << body;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
    }
  };
  expect_key("[search]\nepochz = 3\n", "search.epochz");
  expect_key("[search]\nepochs = \"ten\"\n", "search.epochs");
  expect_key("[search]\nepochs = 5\nwarmup_epochs = 6\n", "search.warmup_epochs");
  expect_key("[search]\ncells = 2\n", "search.cells");
  expect_key("[dataset]\nkind = \"imagenet\"\n", "dataset.kind");
  EXPECT_THROW(load_run_config("no_such_preset_or_file"), ConfigError);
  EXPECT_THROW(load_run_config("desk", {{"search", {{"multiplier", "nonexistent"}}}}),
               MultiplierError);
}

TEST(Config, JsonFilesAndHash) {
  const auto dir = temp_dir("cfg_json");
  const auto path = dir / "run.json";
  {
    std::ofstream out(path);
    out << R"({"preset": "desk", "eval": {"epochs": 3}})";
  }
  const auto a = load_run_config(path.string());
  EXPECT_EQ(a.eval.epochs, 3);
  EXPECT_EQ(config_hash(a.resolved), config_hash(load_run_config(path.string()).resolved));
  EXPECT_NE(config_hash(a.resolved), config_hash(load_run_config("desk").resolved));
  EXPECT_EQ(config_hash(a.resolved).size(), 16u);
}

// ---- datasets ----

TEST(Dataset, SyntheticIsSeededAndBalanced) {
  DatasetSpec spec;
  spec.train_samples = 30;
  spec.test_samples = 9;
  const auto a = make_synthetic(spec);
  const auto b = make_synthetic(spec);
  EXPECT_EQ(a.train.images, b.train.images);
  EXPECT_EQ(a.train.size(), 30u);
  EXPECT_EQ(a.test.size(), 9u);
  EXPECT_EQ(a.train.image_numel(), 3u * 16 * 16);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(std::count(a.train.labels.begin(), a.train.labels.end(), c), 10);
  }
  spec.seed = 8;
  EXPECT_NE(make_synthetic(spec).train.images, a.train.images);
}

TEST(Dataset, StandardizeUsesTrainingStatistics) {
  DatasetSpec spec;
  spec.train_samples = 12;
  spec.test_samples = 6;
  const auto d = load_dataset(spec);
  const std::size_t hw = 16 * 16;
  for (int c = 0; c < 3; ++c) {
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < d.train.size(); ++i) {
      const double* p = d.train.images.data() + (i * 3 + c) * hw;
      for (std::size_t k = 0; k < hw; ++k) {
        s += p[k];
        s2 += p[k] * p[k];
      }
    }
    const double n = static_cast<double>(d.train.size() * hw);
    EXPECT_NEAR(s / n, 0.0, 1e-9);
    EXPECT_NEAR(s2 / n, 1.0, 1e-6);
  }
}

TEST(Dataset, CifarRecords) {
  const auto dir = temp_dir("cifar");
  std::vector<unsigned char> bytes;
  for (int r = 0; r < 2; ++r) {
    bytes.push_back(static_cast<unsigned char>(r + 3));
    for (int i = 0; i < 3072; ++i) bytes.push_back(static_cast<unsigned char>((i + r) % 256));
  }
  for (int i = 1; i <= 5; ++i) write_bytes(dir / ("data_batch_" + std::to_string(i) + ".bin"), bytes);
  write_bytes(dir / "test_batch.bin", bytes);
  const auto d = load_cifar10_file(dir / "test_batch.bin");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.labels[1], 4);
  EXPECT_DOUBLE_EQ(d.images[3072 + 5], 6.0 / 255.0);
  const auto splits = load_cifar10(dir);
  EXPECT_EQ(splits.train.size(), 10u);

  ::setenv("AXNAS_DATA_DIR", dir.c_str(), 1);
  DatasetSpec spec;
  spec.kind = "cifar10";
  spec.train_samples = 4;
  const auto loaded = load_dataset(spec);
  EXPECT_EQ(loaded.train.size(), 4u);
  ::unsetenv("AXNAS_DATA_DIR");
  EXPECT_THROW(load_dataset(spec), DataError);

  auto truncated = bytes;
  truncated.pop_back();
  write_bytes(dir / "bad.bin", truncated);
  EXPECT_THROW(load_cifar10_file(dir / "bad.bin"), DataError);
  auto bad_label = bytes;
  bad_label[0] = 10;
  write_bytes(dir / "bad.bin", bad_label);
  EXPECT_THROW(load_cifar10_file(dir / "bad.bin"), DataError);
}

TEST(Dataset, IdxFiles) {
  const auto dir = temp_dir("idx");
  std::vector<unsigned char> img, lab;
  put_be32(img, 0x803);
  put_be32(img, 2);
  put_be32(img, 2);
  put_be32(img, 3);
  for (int i = 0; i < 12; ++i) img.push_back(static_cast<unsigned char>(i * 20));
  put_be32(lab, 0x801);
  put_be32(lab, 2);
  lab.push_back(1);
  lab.push_back(0);
  write_bytes(dir / "i", img);
  write_bytes(dir / "l", lab);
  const auto d = load_idx(dir / "i", dir / "l", 2);
  EXPECT_EQ(d.height, 2);
  EXPECT_EQ(d.width, 3);
  EXPECT_EQ(d.labels, (std::vector<int>{1, 0}));
  EXPECT_DOUBLE_EQ(d.images[11], 220.0 / 255.0);
  EXPECT_THROW(load_idx(dir / "i", dir / "l", 1), DataError);  // label 1 out of range
  auto bad = img;
  bad[3] = 0x01;
  write_bytes(dir / "b", bad);
  EXPECT_THROW(load_idx(dir / "b", dir / "l", 2), DataError);
  bad = img;
  bad.pop_back();
  write_bytes(dir / "b", bad);
  EXPECT_THROW(load_idx(dir / "b", dir / "l", 2), DataError);
}

TEST(Dataset, BatchesAndShuffles) {
  DatasetSpec spec;
  spec.train_samples = 10;
  spec.test_samples = 3;
  const auto d = make_synthetic(spec);
  const auto idx = shuffled_indices(10, 1, 0);
  EXPECT_EQ(idx, shuffled_indices(10, 1, 0));
  EXPECT_NE(idx, shuffled_indices(10, 1, 1));
  auto sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(sorted[i], i);
  const auto batches = make_batches(d.train, idx, 4);
  ASSERT_EQ(batches.size(), 3u);
  EXPECT_EQ(batches[2].images.dim(0), 2);
  EXPECT_EQ(batches[0].labels[1], d.train.labels[idx[1]]);
  EXPECT_EQ(batches[0].images.at(3 * 256 + 7), d.train.image(idx[1])[7]);
}

// ---- augmentation ----

TEST(Augment, CutoutZeroesAtMostOneSquare) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> img(2 * 8 * 8, 1.0);
    cutout(img, 2, 8, 8, 4, rng);
    EXPECT_EQ(img.size(), 128u);
    for (int c = 0; c < 2; ++c) {
      const auto zeros = std::count(img.begin() + c * 64, img.begin() + (c + 1) * 64, 0.0);
      EXPECT_LE(zeros, 16);
      EXPECT_GE(zeros, 4);  // a clipped corner still keeps a 2x2 square
    }
    EXPECT_TRUE(std::equal(img.begin(), img.begin() + 64, img.begin() + 64));
  }
  std::vector<double> img(16, 1.0);
  cutout(img, 1, 4, 4, 0, rng);
  EXPECT_EQ(std::count(img.begin(), img.end(), 1.0), 16);
}

TEST(Augment, DropPath) {
  Rng rng(2);
  Tensor x = Tensor::full({200, 2}, 1.0);
  EXPECT_EQ(drop_path(x, 0.3, rng, false).impl(), x.impl());
  Tensor y = drop_path(x, 0.25, rng, true);
  int dropped = 0;
  for (int n = 0; n < 200; ++n) {
    const double v = y.at(2 * n);
    EXPECT_EQ(v, y.at(2 * n + 1));
    EXPECT_TRUE(v == 0.0 || std::fabs(v - 1.0 / 0.75) < 1e-15);
    dropped += v == 0.0;
  }
  EXPECT_GT(dropped, 25);
  EXPECT_LT(dropped, 75);
}

// ---- MAC counting and energy ----

TEST(Macs, SpecExamples) {
  Rng rng(3);
  ops::Conv2dOptions same;
  same.padding = 1;
  same.approximable = true;
  profile::LayerRecorder rec;
  ops::conv2d(random_tensor(rng, {1, 3, 16, 16}), random_tensor(rng, {8, 3, 3, 3}), Tensor(), same,
              Fp32Exact{});
  ops::Conv2dOptions dw = same;
  dw.groups = 8;
  ops::conv2d(random_tensor(rng, {1, 8, 16, 16}), random_tensor(rng, {8, 1, 3, 3}), Tensor(), dw,
              Fp32Exact{});
  ops::linear(random_tensor(rng, {1, 64}), random_tensor(rng, {10, 64}), Tensor());
  const auto c = count_macs(rec.records());
  ASSERT_EQ(c.layers.size(), 3u);
  EXPECT_EQ(c.layers[0].ops, 55296u);
  EXPECT_TRUE(c.layers[0].approximable);
  EXPECT_EQ(c.layers[1].ops, 18432u);
  EXPECT_EQ(c.layers[2].ops, 640u);
  EXPECT_FALSE(c.layers[2].approximable);
  EXPECT_EQ(c.approx_macs, 55296u + 18432u);
  EXPECT_EQ(c.exact_flops, 640u);
}

TEST(Macs, ExactFlopConstants) {
  Rng rng(4);
  Tensor x = random_tensor(rng, {1, 2, 4, 4});
  Tensor mean = Tensor::zeros({2}), var = Tensor::full({2}, 1.0);
  profile::LayerRecorder rec;
  ops::batch_norm(x, mean, var, Tensor(), Tensor(), ops::BatchNormOptions{});
  ops::relu(x);
  ops::max_pool2d(x, 3, 2, 1);
  ops::add_n({x, x, x});
  ops::global_avg_pool(x);
  const auto c = count_macs(rec.records());
  ASSERT_EQ(c.layers.size(), 5u);
  EXPECT_EQ(c.layers[0].ops, 2u * 32);  // BN
  EXPECT_EQ(c.layers[1].ops, 32u);      // ReLU
  EXPECT_EQ(c.layers[2].ops, 9u * 8);   // 3x3 window, 2x2x2 outputs
  EXPECT_EQ(c.layers[3].ops, 2u * 32);  // three-way add
  EXPECT_EQ(c.layers[4].ops, 32u);      // global pool reads every input
  EXPECT_EQ(c.approx_macs, 0u);
}

TEST(Macs, MatchesKernelCountersOnRandomNetworks) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = testing::mac_check(100 + seed);
    EXPECT_GT(r.lookups, 0u);
    EXPECT_EQ(r.counted_approx, r.lookups) << seed;
    EXPECT_EQ(r.counted_exact_conv, r.real_conv_macs) << seed;
  }
}

TEST(Macs, CountsDoNotDependOnMode) {
  std::mt19937_64 rng(5);
  const auto g = testing::random_genotype(rng, 3);
  EvalShape shape;
  shape.cells = 3;
  shape.init_channels = 4;
  shape.auxiliary = false;
  Rng r1(1), r2(1);
  EvalNetwork a(g, shape, r1), b(g, shape, r2);
  a.eval();
  b.eval();
  Tensor x = random_tensor(rng, {1, 3, 8, 8});
  NoGradGuard ng;
  MacCounts ca, cb;
  {
    profile::LayerRecorder rec;
    a.forward(x, Fp32Exact{});
    ca = count_macs(rec.records());
  }
  {
    profile::LayerRecorder rec;
    b.forward(x, Quant8{mult::resolve_multiplier("trunc_2"), mult::QuantScheme::kAsymmetric});
    cb = count_macs(rec.records());
  }
  EXPECT_EQ(ca.approx_macs, cb.approx_macs);
  EXPECT_EQ(ca.exact_flops, cb.exact_flops);
  EXPECT_EQ(count_macs(a, 3, 8, 8).approx_macs, ca.approx_macs);
}

TEST(Energy, TableSavingsVsExact8) {
  const auto exact8 = mult::build_builtin_multiplier(mult::BuiltinKind::exact());
  auto with_energy = [&](double e) {
    return mult::MultiplierSpec(
        "m", mult::MultiplierSpec::Table(exact8.table().begin(), exact8.table().end()), e,
        mult::MultiplierSource::kImported);
  };
  EXPECT_NEAR(energy_report(100, 0, with_energy(0.276), exact8).savings_vs_exact8_pct, 29.41, 0.01);
  EXPECT_NEAR(energy_report(100, 0, with_energy(0.311), exact8).savings_vs_exact8_pct, 20.46, 0.01);
  EXPECT_NEAR(energy_report(100, 0, with_energy(0.195), exact8).savings_vs_exact8_pct, 50.13, 0.01);
  EXPECT_EQ(energy_report(100, 7, exact8, exact8).savings_vs_exact8_pct, 0.0);
}

TEST(Energy, MixedWorkloadByHand) {
  const auto exact8 = mult::build_builtin_multiplier(mult::BuiltinKind::exact());
  const auto ngr = mult::MultiplierSpec("ngr", mult::MultiplierSpec::Table(exact8.table().begin(),
                                                                           exact8.table().end()),
                                        0.276, mult::MultiplierSource::kImported);
  // E_fp32 = 18.5 * 0.391 = 7.2335; total = 27.6 + 361.675 = 389.275;
  // all-FP32 = 150 * 7.2335 = 1085.025; exact8 = 39.1 + 361.675 = 400.775.
  const auto r = energy_report(100, 50, ngr, exact8, 18.5);
  EXPECT_NEAR(r.total, 389.275, 1e-9);
  EXPECT_NEAR(r.savings_vs_fp32_pct, 64.12294647588766, 1e-9);
  EXPECT_NEAR(r.savings_vs_exact8_pct, 2.8694404591104727, 1e-9);
  EXPECT_NEAR(r.approx_fraction_pct, 100.0 * 100 / 150, 1e-12);
}

TEST(Energy, EdgeCasesAndMonotonicity) {
  const auto exact8 = mult::build_builtin_multiplier(mult::BuiltinKind::exact());
  const auto t2 = mult::build_builtin_multiplier(mult::BuiltinKind::trunc(2));
  const auto t4 = mult::build_builtin_multiplier(mult::BuiltinKind::trunc(4));
  const auto zero = energy_report(0, 0, t2, exact8);
  EXPECT_EQ(zero.total, 0.0);
  EXPECT_EQ(zero.savings_vs_fp32_pct, 0.0);
  EXPECT_EQ(zero.savings_vs_exact8_pct, 0.0);
  EXPECT_EQ(zero.approx_fraction_pct, 0.0);
  EXPECT_EQ(energy_report(0, 10, t2, exact8).savings_vs_fp32_pct, 0.0);
  const auto a = energy_report(1000, 300, t2, exact8);
  const auto b = energy_report(1000, 300, t4, exact8);
  EXPECT_LT(b.total, a.total);
  EXPECT_GT(b.savings_vs_fp32_pct, a.savings_vs_fp32_pct);
  EXPECT_GT(b.savings_vs_exact8_pct, a.savings_vs_exact8_pct);
  EXPECT_THROW(energy_report(1, 1, t2, exact8, 0.0), ConfigError);
  const auto j = energy_report_to_json(a);
  EXPECT_EQ(j["approx_macs"], 1000);
  EXPECT_TRUE(j.contains("savings_vs_exact8_pct"));
}

// ---- discrete network and pipeline ----

EvalConfig tiny_eval() {
  EvalConfig c;
  c.cells = 3;
  c.init_channels = 4;
  c.epochs = 2;
  c.batch_size = 8;
  c.drop_path_prob = 0.2;
  c.cutout_size = 3;
  c.aux_weight = 0.4;
  c.aux_channels = 8;
  c.aux_hidden = 16;
  c.w_opt.lr0 = 0.05;
  return c;
}

DataSplits tiny_data(int train = 24, int test = 12) {
  DatasetSpec spec;
  spec.image_size = 8;
  spec.train_samples = train;
  spec.test_samples = test;
  return load_dataset(spec);
}

TEST(EvalNetwork, AuxiliaryOutputOnlyWhileTraining) {
  std::mt19937_64 rng(6);
  const auto g = testing::random_genotype(rng, 2);
  auto cfg = tiny_eval();
  const auto data = tiny_data();
  Rng r(1);
  EvalNetwork net(g, eval_shape(cfg, data.train), r);
  Tensor x = random_tensor(rng, {2, 3, 8, 8});
  auto out = net.forward(x, Fp32Exact{});
  ASSERT_TRUE(out.aux.has_value());
  EXPECT_EQ(out.aux->shape(), (Shape{2, 3}));
  net.eval();
  EXPECT_FALSE(net.forward(x, Fp32Exact{}).aux.has_value());
  EXPECT_EQ(net.aux_position(), 2);
}

TEST(EvalNetwork, ParameterCountIndependentOfMode) {
  std::mt19937_64 rng(7);
  const auto g = testing::random_genotype(rng, 3);
  auto cfg = tiny_eval();
  cfg.epochs = 1;
  const auto data = tiny_data();
  const auto fp = run_eval(g, cfg, data);
  cfg.mode = Quant8{mult::resolve_multiplier("trunc_2"), mult::QuantScheme::kAsymmetric};
  const auto q = run_eval(g, cfg, data);
  EXPECT_EQ(fp.parameters, q.parameters);
  EXPECT_EQ(fp.parameters, fp.network->num_parameters());
}

TEST(EvalNetwork, RegularizersOffReduceToPlainLoss) {
  std::mt19937_64 rng(8);
  const auto g = testing::random_genotype(rng, 2);
  auto cfg = tiny_eval();
  cfg.drop_path_prob = 0.0;
  cfg.cutout_size = 0;
  cfg.aux_weight = 0.0;
  const auto data = tiny_data();
  Rng r1(2), r2(2);
  EvalNetwork a(g, eval_shape(cfg, data.train), r1);
  EvalNetwork b(g, eval_shape(cfg, data.train), r2);
  const auto batches = make_batches(data.train, shuffled_indices(24, 0, 0), 8);
  Rng aug(3);
  const double reg = eval_training_loss(a, batches[0], cfg, 0.0, aug).item();
  const double plain =
      ops::softmax_cross_entropy(b.forward(batches[0].images, Fp32Exact{}).logits,
                                 batches[0].labels)
          .item();
  EXPECT_EQ(reg, plain);
}

// The network a single-node skip/skip genotype should build, assembled
// from the same modules in the same construction order.
class SkipSkipNet : public Module {
 public:
  SkipSkipNet(int C, int classes, Rng& rng) {
    ops::Conv2dOptions so;
    so.padding = 1;
    stem_ = register_module("stem_conv", std::make_unique<Conv2d>(3, 3 * C, 3, so, rng));
    stem_bn_ = register_module("stem_bn", std::make_unique<BatchNorm2d>(3 * C, true));
    const auto plan = darts::cell_plan(3, C);
    int cpp = 3 * C, cp = 3 * C;
    bool red_prev = false;
    for (const auto& e : plan) {
      Cell cell;
      if (red_prev) {
        cell.pre0 = register_module("p0", std::make_unique<darts::FactorizedReduce>(cpp, e.channels,
                                                                                   true, false, rng));
      } else {
        cell.pre0 = register_module("p0", std::make_unique<darts::ReluConvBn>(cpp, e.channels, true,
                                                                             false, rng));
      }
      cell.pre1 =
          register_module("p1", std::make_unique<darts::ReluConvBn>(cp, e.channels, true, false, rng));
      if (e.reduction) {
        cell.skip0 = register_module("s0", std::make_unique<darts::FactorizedReduce>(
                                               e.channels, e.channels, true, false, rng));
        cell.skip1 = register_module("s1", std::make_unique<darts::FactorizedReduce>(
                                               e.channels, e.channels, true, false, rng));
      }
      cells_.push_back(cell);
      cpp = cp;
      cp = e.channels;
      red_prev = e.reduction;
    }
    fc_ = register_module("fc", std::make_unique<Linear>(cp, classes, rng));
  }

  Tensor forward(const Tensor& x) {
    const ExecMode m = Fp32Exact{};
    Tensor s0 = stem_bn_->forward(stem_->forward(x, m)), s1 = s0;
    for (auto& c : cells_) {
      Tensor a = c.pre0->forward(s0, m), b = c.pre1->forward(s1, m);
      if (c.skip0 != nullptr) {
        a = c.skip0->forward(a, m);
        b = c.skip1->forward(b, m);
      }
      s0 = s1;
      s1 = ops::concat_channels({ops::add_n({a, b})});
    }
    return fc_->forward(ops::global_avg_pool(s1));
  }

 private:
  struct Cell {
    darts::CellOp* pre0 = nullptr;
    darts::CellOp* pre1 = nullptr;
    darts::CellOp* skip0 = nullptr;
    darts::CellOp* skip1 = nullptr;
  };
  Conv2d* stem_;
  BatchNorm2d* stem_bn_;
  std::vector<Cell> cells_;
  Linear* fc_;
};

TEST(EvalNetwork, SkipSkipGenotypeMatchesHandBuiltNetwork) {
  darts::Genotype g;
  g.normal = {{{0, darts::OpKind::kSkipConnect}, {1, darts::OpKind::kSkipConnect}}};
  g.reduce = g.normal;
  g.concat = {2};
  EvalShape shape;
  shape.cells = 3;
  shape.init_channels = 4;
  shape.num_classes = 3;
  shape.auxiliary = false;
  Rng r1(9), r2(9);
  EvalNetwork net(g, shape, r1);
  SkipSkipNet ref(4, 3, r2);
  EXPECT_EQ(net.num_parameters(), ref.num_parameters());
  const auto data = tiny_data();
  const auto batches = make_batches(data.train, shuffled_indices(24, 0, 0), 8);
  optim::Sgd oa(net.parameters(), {0.9, 3e-4}), ob(ref.parameters(), {0.9, 3e-4});
  for (const auto& b : batches) {
    oa.zero_grad();
    ob.zero_grad();
    Tensor la = ops::softmax_cross_entropy(net.forward(b.images, Fp32Exact{}).logits, b.labels);
    Tensor lb = ops::softmax_cross_entropy(ref.forward(b.images), b.labels);
    ASSERT_EQ(la.item(), lb.item());
    la.backward();
    lb.backward();
    oa.step(0.05);
    ob.step(0.05);
  }
  net.eval();
  ref.eval();
  NoGradGuard ng;
  Tensor ya = net.forward(batches[0].images, Fp32Exact{}).logits;
  Tensor yb = ref.forward(batches[0].images);
  for (std::size_t i = 0; i < ya.numel(); ++i) EXPECT_EQ(ya.at(i), yb.at(i));
}

SearchConfig tiny_search() {
  SearchConfig c;
  c.cells = 3;
  c.intermediate_nodes = 2;
  c.init_channels = 3;
  c.epochs = 3;
  c.warmup_epochs = 1;
  c.batch_size = 6;
  c.a_opt.lr = 3e-3;
  c.w_opt.lr0 = 0.05;
  return c;
}

TEST(Pipeline, SearchIsDeterministicAndValid) {
  const auto data = tiny_data();
  const auto cfg = tiny_search();
  const auto a = run_search(cfg, data);
  const auto b = run_search(cfg, data);
  EXPECT_EQ(a.genotype, b.genotype);
  a.genotype.validate();
  for (const auto* cell : {&a.genotype.normal, &a.genotype.reduce}) {
    for (const auto& node : *cell) {
      EXPECT_EQ(node.size(), 2u);
      for (const auto& e : node) EXPECT_NE(e.op, darts::OpKind::kZero);
    }
  }
  ASSERT_EQ(a.log.size(), 3u);
  EXPECT_EQ(a.log[0].train_loss, b.log[0].train_loss);
  EXPECT_EQ(a.log[2].val_loss, b.log[2].val_loss);
  const auto fa = a.final_alphas.normal.data(), ia = a.initial_alphas.normal.data();
  EXPECT_FALSE(std::equal(fa.begin(), fa.end(), ia.begin()));
}

TEST(Pipeline, FullWarmupLeavesAlphaUntouched) {
  const auto data = tiny_data();
  auto cfg = tiny_search();
  cfg.warmup_epochs = cfg.epochs;
  const auto r = run_search(cfg, data);
  for (auto [x, y] : {std::pair{r.final_alphas.normal, r.initial_alphas.normal},
                      std::pair{r.final_alphas.reduce, r.initial_alphas.reduce}}) {
    for (std::size_t i = 0; i < x.numel(); ++i) ASSERT_EQ(x.at(i), y.at(i));
  }
  EXPECT_EQ(r.genotype, darts::derive_genotype(r.initial_alphas));
}

TEST(Pipeline, SearchRejectsTinyDatasets) {
  auto cfg = tiny_search();
  cfg.batch_size = 13;
  EXPECT_THROW(run_search(cfg, tiny_data()), DataError);
}

TEST(Pipeline, EvalIsDeterministic) {
  std::mt19937_64 rng(10);
  const auto g = testing::random_genotype(rng, 2);
  const auto data = tiny_data();
  const auto a = run_eval(g, tiny_eval(), data);
  const auto b = run_eval(g, tiny_eval(), data);
  EXPECT_EQ(a.test_accuracy, b.test_accuracy);
  EXPECT_EQ(a.log.back().train_loss, b.log.back().train_loss);
  EXPECT_EQ(a.log.size(), 2u);
}

TEST(Pipeline, LogCsv) {
  const auto dir = temp_dir("log");
  write_log({{0, 1.5, 2.0, 50.0, 0.1, 0.25}}, dir / "l.csv");
  std::ifstream in(dir / "l.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "epoch,train_loss,val_loss,val_acc,lr,seconds");
  EXPECT_EQ(row, "0,1.500000,2.000000,50.00,0.1,0.250");
}

}  // namespace
}  // namespace axnas::experiment
