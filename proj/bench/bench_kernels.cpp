// Parallel kernels against their serial references on the shapes the MNIST networks use.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "skd/architectures.hpp"
#include "skd/kernels.hpp"
#include "skd/kernels_reference.hpp"

namespace {

using skd::kernels::Op;

std::vector<float> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::vector<float> v(n);
  for (auto& x : v) x = normal(gen);
  return v;
}

// Student hidden layer: [256, 784] x [784, 784].
template <bool kReference>
void BM_Gemm(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0)), n = 784, k = 784;
  const auto a = random_vector(m * k, 1), b = random_vector(k * n, 2);
  std::vector<float> c(m * n);
  for (auto _ : state) {
    if constexpr (kReference) {
      skd::kernels::reference::gemm(Op::kNone, Op::kNone, m, n, k, a.data(), k, b.data(), n, c.data(), n, false);
    } else {
      skd::kernels::gemm(Op::kNone, Op::kNone, m, n, k, a.data(), k, b.data(), n, c.data(), n, false);
    }
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 2 * m * n * k));
}
BENCHMARK(BM_Gemm<false>)->Name("gemm/parallel")->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gemm<true>)->Name("gemm/reference")->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

// Teacher first convolution: 3x3, 1 -> 32 channels, same padding, on a batch of 28x28 images.
skd::kernels::WindowGeometry conv_geometry(std::size_t batch) {
  skd::kernels::WindowGeometry g;
  g.batch = batch;
  g.in_h = g.in_w = 28;
  g.channels = 1;
  g.kernel_h = g.kernel_w = 3;
  g.pad_top = g.pad_left = 1;
  g.out_h = g.out_w = 28;
  return g;
}

void BM_ConvIm2colGemm(benchmark::State& state) {
  const auto g = conv_geometry(static_cast<std::size_t>(state.range(0)));
  const std::size_t out_ch = 32;
  const auto x = random_vector(g.in_volume(), 3), w = random_vector(g.patch_size() * out_ch, 4);
  std::vector<float> cols(g.out_pixels() * g.patch_size()), y(g.out_pixels() * out_ch);
  for (auto _ : state) {
    skd::kernels::im2col(g, x.data(), cols.data());
    skd::kernels::gemm(Op::kNone, Op::kNone, g.out_pixels(), out_ch, g.patch_size(), cols.data(), g.patch_size(),
                       w.data(), out_ch, y.data(), out_ch, false);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ConvIm2colGemm)->Name("conv3x3/parallel")->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ConvReference(benchmark::State& state) {
  const auto g = conv_geometry(static_cast<std::size_t>(state.range(0)));
  const std::size_t out_ch = 32;
  const auto x = random_vector(g.in_volume(), 3), w = random_vector(g.patch_size() * out_ch, 4);
  const std::vector<float> bias(out_ch, 0.0f);
  std::vector<float> y(g.out_pixels() * out_ch);
  for (auto _ : state) {
    skd::kernels::reference::conv2d_forward(g, out_ch, x.data(), w.data(), bias.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ConvReference)->Name("conv3x3/reference")->Arg(256)->Unit(benchmark::kMillisecond);

skd::kernels::WindowGeometry pool_geometry(std::size_t batch) {
  skd::kernels::WindowGeometry g;
  g.batch = batch;
  g.in_h = g.in_w = 28;
  g.channels = 32;
  g.kernel_h = g.kernel_w = 2;
  g.stride = 2;
  g.out_h = g.out_w = 14;
  return g;
}

template <bool kReference>
void BM_MaxPool(benchmark::State& state) {
  const auto g = pool_geometry(static_cast<std::size_t>(state.range(0)));
  const auto x = random_vector(g.in_volume(), 5);
  std::vector<float> y(g.out_pixels() * g.channels);
  std::vector<std::uint32_t> arg(y.size());
  for (auto _ : state) {
    if constexpr (kReference) {
      skd::kernels::reference::maxpool_forward(g, x.data(), y.data(), arg.data());
    } else {
      skd::kernels::maxpool_forward(g, x.data(), y.data(), arg.data());
    }
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_MaxPool<false>)->Name("maxpool2x2/parallel")->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaxPool<true>)->Name("maxpool2x2/reference")->Arg(256)->Unit(benchmark::kMillisecond);

// One training-mode forward and backward pass of each MNIST network on a batch of 256.
template <bool kTeacher>
void BM_NetworkStep(benchmark::State& state) {
  auto net = kTeacher ? skd::mnist_teacher<float>(2, 5) : skd::mnist_student<float>(2, 5);
  net.initialize(1);
  skd::Tensor<float> x({256, 784}, random_vector(256 * 784, 6));
  skd::Tensor<float> g({256, 2, 5}, random_vector(256 * 10, 7));
  for (auto _ : state) {
    auto fwd = net.forward(x, skd::Mode::kTrain, 3);
    auto grads = net.backward(g, fwd.state);
    benchmark::DoNotOptimize(grads.grads.data());
  }
}
BENCHMARK(BM_NetworkStep<true>)->Name("step/mnist_teacher")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NetworkStep<false>)->Name("step/mnist_student")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
