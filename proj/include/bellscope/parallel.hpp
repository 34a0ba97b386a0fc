#ifndef BELLSCOPE_PARALLEL_HPP
#define BELLSCOPE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bellscope
{

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for stream `index` under `master`.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return mix_seed(mix_seed(master) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

inline unsigned resolve_threads(unsigned requested) noexcept
{
    if(requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, n). Each index writes only its own output slot,
/// so results are independent of scheduling. The first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body)
{
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), n);
    if(workers <= 1)
    {
        for(std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for(std::size_t w = 0; w < workers; ++w)
    {
        pool.emplace_back([&] {
            for(std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    body(i);
                }
                catch(...)
                {
                    std::lock_guard lock(failure_mutex);
                    if(!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if(failure) std::rethrow_exception(failure);
}

} // namespace bellscope

#endif
