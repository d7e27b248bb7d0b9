#pragma once

// Process-wide store of built fusion modules, optionally backed by an
// on-disk cache. Safe to use from several threads; each composition is
// built at most once.

#include "fusion/fusion_module.hpp"

#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace fusion {

class ModuleRegistry {
public:
    static constexpr const char* kFormatTag = "v1";

    ModuleRegistry() = default;
    explicit ModuleRegistry(std::filesystem::path cache_dir) : dir_(std::move(cache_dir)) {}

    void set_cache_dir(std::optional<std::filesystem::path> dir);
    const std::optional<std::filesystem::path>& cache_dir() const { return dir_; }

    ModulePtr get(const Composition& A);
    // Builds from scratch, bypassing memory and disk.
    static ModulePtr build_fresh(const Composition& A);

    // Cache file name for A: FNV-1a of "<format tag>:<A>".
    static std::string cache_key(const Composition& A);
    std::size_t disk_hits() const;
    std::size_t builds() const;
    // Compositions requested so far, in order.
    std::vector<Composition> known() const;

private:
    ModulePtr load_or_build(const Composition& A);

    mutable std::mutex mutex_;
    std::optional<std::filesystem::path> dir_;
    std::map<Composition, std::shared_future<ModulePtr>> modules_;
    std::size_t disk_hits_ = 0;
    std::size_t builds_ = 0;
};

ModuleRegistry& registry();

// Shorthand for registry().get(A).
inline ModulePtr module_for(const Composition& A) { return registry().get(A); }

}  // namespace fusion
