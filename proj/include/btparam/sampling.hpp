#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace btparam {

// Derives an independent stream seed; used to give every sample chunk its own
// generator so results do not depend on the worker count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Uniform stream with an explicit bits->double mapping. The mapping is spelled
// out (instead of uniform_real_distribution) so identical seeds give identical
// reports across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; } // [0,1)

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(bits() % n); }

    bool coin() { return (bits() & 1u) != 0; }

private:
    std::mt19937_64 eng_;
};

inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned n = hw ? hw : 1;
    if (const char* env = std::getenv("BTPARAM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v <= 1024) n = static_cast<unsigned>(v);
    }
    return n;
}

// Runs fn(chunk_index, begin, end) over [0, count) in fixed-size chunks.
// Chunk boundaries are independent of the worker count, so per-chunk seeding
// keeps sampling deterministic under any BTPARAM_THREADS setting.
template <class Fn>
void for_each_chunk(std::size_t count, std::size_t chunk_size, Fn&& fn) {
    if (count == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t nchunks = (count + chunk_size - 1) / chunk_size;
    const std::size_t workers =
        std::min<std::size_t>(worker_count(), nchunks);

    auto run_chunk = [&](std::size_t c) {
        fn(c, c * chunk_size, std::min(count, (c + 1) * chunk_size));
    };

    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) run_chunk(c);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                try {
                    run_chunk(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Max-reduction sample: value plus the index that produced it; ties prefer the
// smaller index so parallel runs reduce to the same winner.
struct MaxSample {
    double value = -1.0;
    std::size_t index = static_cast<std::size_t>(-1);

    void consider(double v, std::size_t i) {
        if (v > value || (v == value && i < index)) {
            value = v;
            index = i;
        }
    }
    void merge(const MaxSample& o) { consider(o.value, o.index); }
};

} // namespace btparam
