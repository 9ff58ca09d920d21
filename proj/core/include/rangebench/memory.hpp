#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace rangebench {

/// Byte counter for index-attributable allocations. Each engine owns one and
/// routes its containers through CountingAllocator, so `current()` is the live
/// index storage (container capacity, not length) and `peak()` the build-time
/// high-water mark. Input record buffers are never counted.
class MemoryCounter {
public:
    void add(std::size_t bytes) {
        current_ += bytes;
        if (current_ > peak_) peak_ = current_;
    }
    void sub(std::size_t bytes) { current_ -= bytes; }

    std::size_t current() const { return current_; }
    std::size_t peak() const { return peak_; }

private:
    std::size_t current_ = 0;
    std::size_t peak_ = 0;
};

/// std::allocator wrapper that reports every allocation to a MemoryCounter.
/// The counter is non-owning and must outlive every container using it.
template <typename T>
class CountingAllocator {
public:
    using value_type = T;

    CountingAllocator() = delete;
    explicit CountingAllocator(MemoryCounter* counter) : counter_(counter) {}

    template <typename U>
    CountingAllocator(const CountingAllocator<U>& other) : counter_(other.counter()) {}

    T* allocate(std::size_t n) {
        counter_->add(n * sizeof(T));
        return std::allocator<T>().allocate(n);
    }
    void deallocate(T* p, std::size_t n) {
        counter_->sub(n * sizeof(T));
        std::allocator<T>().deallocate(p, n);
    }

    MemoryCounter* counter() const { return counter_; }

    friend bool operator==(const CountingAllocator& a, const CountingAllocator& b) {
        return a.counter_ == b.counter_;
    }

private:
    MemoryCounter* counter_;
};

template <typename T>
using CountedVector = std::vector<T, CountingAllocator<T>>;

}  // namespace rangebench
