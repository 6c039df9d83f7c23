#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "pasteup/annotations.hpp"
#include "pasteup/config.hpp"
#include "pasteup/filtering.hpp"
#include "pasteup/pipeline.hpp"
#include "pasteup/toy.hpp"

#include "test_util.hpp"

using namespace pasteup;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("toy corpus layout and annotation files exist") {
    test_util::ScratchDir dir("pasteup-toy");
    const ToyCorpusPaths paths = write_toy_corpus(dir.path());
    CHECK(fs::exists(paths.instances_json));
    CHECK(fs::exists(paths.backgrounds_json));
    CHECK(paths.root == dir.path());

    const AnnotationSet inst = load_annotations(paths.instances_json);
    const AnnotationSet bg = load_annotations(paths.backgrounds_json);
    CHECK(inst.images.size() == 4);        // default sources
    CHECK(inst.annotations.size() == 12);  // three shapes per source
    CHECK(inst.dropped == 0);
    CHECK(bg.images.size() == 20);
    CHECK(bg.dropped == 0);
    for (const auto& img : inst.images) CHECK(fs::exists(paths.root / img.file));
    for (const auto& img : bg.images) CHECK(fs::exists(paths.root / img.file));
}

TEST_CASE("toy corpus is reproducible byte for byte and seed-sensitive") {
    test_util::ScratchDir dir("pasteup-toy-repro");
    ToyCorpusSpec spec;
    spec.backgrounds = 6;
    spec.sources = 2;
    const ToyCorpusPaths a = write_toy_corpus(dir.path() / "a", spec);
    const ToyCorpusPaths b = write_toy_corpus(dir.path() / "b", spec);
    CHECK(slurp(a.instances_json) == slurp(b.instances_json));
    CHECK(slurp(a.backgrounds_json) == slurp(b.backgrounds_json));
    for (const auto& entry : fs::recursive_directory_iterator(dir.path() / "a")) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), dir.path() / "a");
        CHECK(slurp(entry.path()) == slurp(dir.path() / "b" / rel));
    }

    spec.seed = 999;
    const ToyCorpusPaths c = write_toy_corpus(dir.path() / "c", spec);
    const InstanceCorpus ic_a = load_instance_corpus(a.instances_json);
    const InstanceCorpus ic_c = load_instance_corpus(c.instances_json);
    CHECK(corpus_fingerprint(ic_a) != corpus_fingerprint(ic_c));
}

TEST_CASE("both region encodings appear in the instance annotations") {
    test_util::ScratchDir dir("pasteup-toy-enc");
    const ToyCorpusPaths paths = write_toy_corpus(dir.path());
    const AnnotationSet set = load_annotations(paths.instances_json);
    bool saw_polygon = false, saw_rle = false;
    for (const auto& ann : set.annotations) {
        (ann.region.is_rle ? saw_rle : saw_polygon) = true;
    }
    CHECK(saw_polygon);
    CHECK(saw_rle);
}

TEST_CASE("default corpus survives the default filters with every class present") {
    test_util::ScratchDir dir("pasteup-toy-filter");
    const ToyCorpusPaths paths = write_toy_corpus(dir.path());
    const PipelineConfig cfg;

    const InstanceCorpus instances = load_instance_corpus(paths.instances_json);
    CHECK(instances.dropped == 0);
    REQUIRE(instances.records.size() == 12);
    const InstanceFilterResult fi = filter_instances(instances.records, cfg);
    CHECK(fi.kept.size() >= 4);
    for (const auto& rej : fi.rejected) {
        // scale sampling never sees these, but area must not be the cause:
        // the generator promises ratios inside the window
        CHECK(rej.reason == RejectReason::LowScore);
    }
    std::set<std::string> classes;
    for (const auto& rec : fi.kept) classes.insert(rec.class_label);
    CHECK(classes == std::set<std::string>{"disk", "ring", "slab", "wedge"});

    const BackgroundCorpus backgrounds = load_background_corpus(paths.backgrounds_json);
    REQUIRE(backgrounds.records.size() == 20);
    const BackgroundFilterResult fb = filter_backgrounds(backgrounds.records, cfg);
    CHECK(fb.kept.size() == 20);
    CHECK(fb.rejected.empty());
}

TEST_CASE("toy instances have in-window ratios and valid scores") {
    test_util::ScratchDir dir("pasteup-toy-ratio");
    const ToyCorpusPaths paths = write_toy_corpus(dir.path());
    const InstanceCorpus instances = load_instance_corpus(paths.instances_json);
    const PipelineConfig cfg;
    for (const auto& rec : instances.records) {
        CHECK(rec.area_ratio >= cfg.area_window.min_ratio);
        CHECK(rec.area_ratio <= cfg.area_window.max_ratio);
        CHECK(rec.score >= 0.0);
        CHECK(rec.score <= 1.0);
        CHECK(rec.mask.area() > 0);
        // tight crop: the mask touches all four edges of its frame
        const Box bbox = *rec.mask.tight_bbox();
        CHECK(bbox.left == 0);
        CHECK(bbox.top == 0);
        CHECK(bbox.right == rec.mask.width);
        CHECK(bbox.bottom == rec.mask.height);
    }
    // some class keeps more than one instance with distinct ratios, so the
    // per-class scale distribution is not a point mass everywhere
    const InstanceFilterResult fi = filter_instances(instances.records, cfg);
    const auto stats = compute_class_stats(fi.kept, fi.class_thresholds);
    bool any_spread = false;
    for (const auto& cs : stats) any_spread = any_spread || cs.sigma2 > 0.0;
    CHECK(any_spread);
}

TEST_CASE("toy backgrounds carry 0..2 existing regions within coverage bounds") {
    test_util::ScratchDir dir("pasteup-toy-bg");
    const ToyCorpusPaths paths = write_toy_corpus(dir.path());
    const BackgroundCorpus backgrounds = load_background_corpus(paths.backgrounds_json);
    bool saw_zero = false, saw_some = false;
    for (const auto& rec : backgrounds.records) {
        CHECK(rec.image.width == 512);
        CHECK(rec.image.height == 512);
        CHECK(rec.instance_regions.size() <= 2);
        (rec.instance_regions.empty() ? saw_zero : saw_some) = true;
        CHECK(rec.coverage_ratio <= 0.85);
        for (const auto& region : rec.instance_regions) {
            CHECK(region.box.left >= 0);
            CHECK(region.box.top >= 0);
            CHECK(region.box.right <= 512);
            CHECK(region.box.bottom <= 512);
            CHECK(region.box.width() > 0);
            CHECK(region.box.height() > 0);
        }
    }
    CHECK(saw_zero);
    CHECK(saw_some);
}

TEST_CASE("spec knobs control corpus shape") {
    test_util::ScratchDir dir("pasteup-toy-spec");
    ToyCorpusSpec spec;
    spec.backgrounds = 3;
    spec.sources = 1;
    spec.bg_size = 600;
    spec.src_size = 128;
    const ToyCorpusPaths paths = write_toy_corpus(dir.path(), spec);
    const AnnotationSet inst = load_annotations(paths.instances_json);
    const AnnotationSet bg = load_annotations(paths.backgrounds_json);
    CHECK(inst.images.size() == 1);
    CHECK(inst.annotations.size() == 3);
    CHECK(bg.images.size() == 3);
    for (const auto& img : inst.images) {
        CHECK(img.width == 128);
        CHECK(img.height == 128);
    }
    for (const auto& img : bg.images) {
        CHECK(img.width == 600);
        CHECK(img.height == 600);
    }
}
