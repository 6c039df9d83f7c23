// Wall-clock cost of the hot pipeline stages at the production frame size.
#include <benchmark/benchmark.h>

#include <cstdint>

#include "pasteup/compositor.hpp"
#include "pasteup/config.hpp"
#include "pasteup/enhance.hpp"
#include "pasteup/metrics.hpp"
#include "pasteup/morphology.hpp"
#include "pasteup/placement.hpp"
#include "pasteup/records.hpp"
#include "pasteup/rng.hpp"

namespace {

using namespace pasteup;

constexpr int kFrame = 512;

Image random_image(std::uint64_t seed, int w, int h) {
    Rng rng(seed);
    Image img(w, h, 3);
    for (auto& byte : img.data) byte = static_cast<std::uint8_t>(rng.uniform_index(256));
    return img;
}

/// Centered disk covering roughly `ratio` of the frame.
BinaryMask disk_mask(int w, int h, double ratio) {
    BinaryMask mask(w, h);
    const double radius2 = ratio * w * h / 3.141592653589793;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = x - w / 2.0, dy = y - h / 2.0;
            mask.set(x, y, dx * dx + dy * dy <= radius2);
        }
    }
    return mask;
}

BackgroundRecord bench_background() {
    BackgroundRecord bg;
    bg.id = "bench";
    bg.image = random_image(11, kFrame, kFrame);
    for (int i = 0; i < 2; ++i) {
        RegionRef ref;
        const int side = 96;
        const int offset = 60 + 220 * i;
        ref.box = Box{offset, offset, offset + side, offset + side};
        ref.mask = disk_mask(side, side, 0.6);
        bg.instance_regions.push_back(std::move(ref));
    }
    bg.coverage_ratio = 0.07;
    return bg;
}

void BM_distance_transform(benchmark::State& state) {
    const BinaryMask mask = disk_mask(kFrame, kFrame, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(squared_distance_transform(mask));
    }
}
BENCHMARK(BM_distance_transform)->Unit(benchmark::kMillisecond);

void BM_dilate_disk(benchmark::State& state) {
    const BinaryMask mask = disk_mask(kFrame, kFrame, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dilate_disk(mask, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_dilate_disk)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_solve_alpha(benchmark::State& state) {
    const Trimap trimap = make_trimap(disk_mask(kFrame, kFrame, 0.1), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_alpha(trimap));
    }
}
BENCHMARK(BM_solve_alpha)->Unit(benchmark::kMillisecond);

void BM_feasible_region(benchmark::State& state) {
    const BackgroundRecord bg = bench_background();
    const BinaryMask placed = disk_mask(120, 120, 0.7);
    const IouMode mode = state.range(0) == 0 ? IouMode::Bbox : IouMode::Mask;
    for (auto _ : state) {
        benchmark::DoNotOptimize(feasible_region(bg, 120, 120, placed, 0.3, mode));
    }
}
BENCHMARK(BM_feasible_region)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_enhance(benchmark::State& state) {
    const BinaryMask mask = disk_mask(160, 160, 0.5);
    EnhancementSpec spec;
    spec.type = static_cast<EnhancementType>(state.range(0));
    Rng rng(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enhance_mask(mask, spec, rng));
    }
}
BENCHMARK(BM_enhance)
    ->Arg(static_cast<int>(EnhancementType::Dilated))
    ->Arg(static_cast<int>(EnhancementType::ConvexHull))
    ->Arg(static_cast<int>(EnhancementType::Ellipse))
    ->Arg(static_cast<int>(EnhancementType::BboxBezier))
    ->Unit(benchmark::kMillisecond);

void BM_ssim_full_frame(benchmark::State& state) {
    const Image a = random_image(21, kFrame, kFrame);
    Image b = a;
    Rng rng(22);
    for (auto& byte : b.data) {
        if (rng.uniform() < 0.1) byte = static_cast<std::uint8_t>(rng.uniform_index(256));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssim(a, b));
    }
}
BENCHMARK(BM_ssim_full_frame)->Unit(benchmark::kMillisecond);

void BM_build_triplet(benchmark::State& state) {
    const BackgroundRecord bg = bench_background();
    InstanceRecord instance;
    instance.id = "bench-inst";
    instance.class_label = "disk";
    instance.image = random_image(33, 160, 160);
    instance.mask = disk_mask(160, 160, 0.6);
    instance.area_ratio = 0.1;
    instance.score = 0.9;

    PipelineConfig cfg;
    Rng rng(44);
    const ResizedInstance resized = resize_instance(instance, 0.10, kFrame, kFrame, cfg);
    Placement placement;
    placement.scale = 0.10;
    placement.width = resized.image.width;
    placement.height = resized.image.height;
    placement.cx = kFrame / 2;
    placement.cy = kFrame / 2;
    EnhancementSpec spec;
    spec.type = EnhancementType::Dilated;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            build_triplet(bg, resized, placement, spec, cfg, rng, "bench-inst", "disk", 1));
    }
}
BENCHMARK(BM_build_triplet)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
