#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "qlens/bundle.hpp"
#include "qlens/examples.hpp"
#include "qlens/store.hpp"
#include "random_circuits.hpp"

using namespace qlens;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qlens-store-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST(Bundle, DeterministicId) {
    const auto a = analyze(examples::load("grover2"));
    const auto b = analyze(examples::load("grover2"));
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.id.size(), 32u);
    EXPECT_EQ(io::canonical_bytes(a), io::canonical_bytes(b));
    EXPECT_NE(a.id, analyze(examples::load("qft3")).id);
}

TEST(Bundle, GroverContents) {
    const auto b = analyze(examples::load("grover2"));
    EXPECT_EQ(b.step_count(), 16u);
    ASSERT_EQ(b.summary.matrix.size(), 17u);
    const auto& last = b.summary.matrix.back();
    EXPECT_NEAR(last[0], 0, 1e-12);
    EXPECT_NEAR(last[1], 0, 1e-12);
    EXPECT_NEAR(last[2], 0, 1e-12);
    EXPECT_NEAR(last[3], 1, 1e-12);
    EXPECT_EQ(b.dandelion.size(), 17u);
    EXPECT_EQ(b.evolution.from_step, 0u);
    EXPECT_EQ(b.evolution.to_step, 16u);
}

TEST(Bundle, CapIsEnforced) {
    const Circuit wide(13, {{"b", {Gate::h(0)}}}, std::nullopt, hard_max_qubits);
    EXPECT_THROW(analyze(wide), CapExceeded);
    EXPECT_NO_THROW(analyze(wide, 13));
}

TEST(Bundle, CanonicalRoundTrip) {
    for (const char* name : {"grover2", "qft3"}) {
        const auto b = analyze(examples::load(name));
        const std::string bytes = io::canonical_bytes(b);
        const auto back = io::bundle_from_bytes(bytes);
        EXPECT_EQ(io::canonical_bytes(back), bytes) << name;
        EXPECT_EQ(back.id, b.id);
        EXPECT_EQ(back.steps, b.steps);
    }
}

TEST(Bundle, RoundTripRandomCircuits) {
    for (const auto& c : testing_support::random_suite(25, 77)) {
        const auto b = analyze(c);
        const std::string bytes = io::canonical_bytes(b);
        EXPECT_EQ(io::canonical_bytes(io::bundle_from_bytes(bytes)), bytes);
    }
}

TEST(Bundle, MalformedBytes) {
    EXPECT_THROW(io::bundle_from_bytes("{not json"), SchemaError);
    EXPECT_THROW(io::bundle_from_bytes("{}"), SchemaError);
}

TEST(Store, MemoryOnly) {
    BundleStore store;
    const auto b = analyze(examples::load("qft3"));
    auto [entry, inserted] = store.put(b);
    EXPECT_TRUE(inserted);
    EXPECT_EQ(entry.bundle->id, b.id);
    auto again = store.put(b);
    EXPECT_FALSE(again.second);
    EXPECT_EQ(again.first.bundle.get(), entry.bundle.get());
    EXPECT_EQ(store.size(), 1u);
    ASSERT_TRUE(store.get(b.id));
    EXPECT_EQ(*store.get(b.id)->bytes, io::canonical_bytes(b));
    EXPECT_FALSE(store.get("0123456789abcdef0123456789abcdef"));
}

TEST(Store, RejectsInvalidIds) {
    BundleStore store;
    EXPECT_FALSE(store.get(""));
    EXPECT_FALSE(store.get("../etc/passwd"));
    EXPECT_FALSE(store.get("ABCDEF"));
    EXPECT_FALSE(store.get(std::string(65, 'a')));
    EXPECT_TRUE(BundleStore::valid_id("deadbeef"));
}

TEST(Store, PersistsAcrossInstances) {
    TempDir dir;
    const auto b = analyze(examples::load("grover2"));
    {
        BundleStore store(dir.path);
        store.put(b);
        EXPECT_TRUE(fs::exists(dir.path / (b.id + ".json")));
        EXPECT_FALSE(fs::exists(dir.path / (b.id + ".json.tmp")));
    }
    BundleStore reopened(dir.path);
    EXPECT_EQ(reopened.size(), 0u);
    auto entry = reopened.get(b.id);
    ASSERT_TRUE(entry);
    EXPECT_EQ(*entry->bundle, b);
    EXPECT_EQ(*entry->bytes, io::canonical_bytes(b));
    EXPECT_EQ(reopened.size(), 1u);
}

TEST(Store, CorruptFileIsReported) {
    TempDir dir;
    BundleStore store(dir.path);
    const std::string id = "00112233445566778899aabbccddeeff";
    std::ofstream(dir.path / (id + ".json")) << "{\"truncated\":";
    EXPECT_THROW(store.get(id), SchemaError);
}

TEST(Store, ConcurrentPutAndGet) {
    TempDir dir;
    BundleStore store(dir.path);
    const auto suite = testing_support::random_suite(8, 5);
    std::vector<AnalysisBundle> bundles;
    for (const auto& c : suite) bundles.push_back(analyze(c));

    std::atomic<int> inserted{0};
    std::atomic<int> mismatches{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&] {
            for (const auto& b : bundles) {
                if (store.put(b).second) ++inserted;
                auto e = store.get(b.id);
                if (!e || *e->bytes != io::canonical_bytes(b)) ++mismatches;
            }
        });
    }
    for (auto& t : threads) t.join();

    std::set<std::string> ids;
    for (const auto& b : bundles) ids.insert(b.id);
    EXPECT_EQ(inserted.load(), static_cast<int>(ids.size()));
    EXPECT_EQ(mismatches.load(), 0);
    EXPECT_EQ(store.size(), ids.size());
    for (const auto& id : ids) EXPECT_TRUE(fs::exists(dir.path / (id + ".json")));
}
