#include "fusion/registry.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fusion {

void ModuleRegistry::set_cache_dir(std::optional<std::filesystem::path> dir) {
    std::lock_guard lock(mutex_);
    dir_ = std::move(dir);
}

std::string ModuleRegistry::cache_key(const Composition& A) {
    std::string text = std::string(kFormatTag) + ":" + A.to_string();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::size_t ModuleRegistry::disk_hits() const {
    std::lock_guard lock(mutex_);
    return disk_hits_;
}

std::size_t ModuleRegistry::builds() const {
    std::lock_guard lock(mutex_);
    return builds_;
}

std::vector<Composition> ModuleRegistry::known() const {
    std::lock_guard lock(mutex_);
    std::vector<Composition> out;
    for (const auto& [A, f] : modules_) out.push_back(A);
    return out;
}

ModulePtr ModuleRegistry::build_fresh(const Composition& A) { return std::make_shared<const FusionModule>(A); }

ModulePtr ModuleRegistry::load_or_build(const Composition& A) {
    std::optional<std::filesystem::path> dir;
    {
        std::lock_guard lock(mutex_);
        dir = dir_;
    }
    std::filesystem::path file;
    if (dir) {
        file = *dir / (cache_key(A) + ".fm");
        std::ifstream in(file);
        if (in) {
            std::stringstream buf;
            buf << in.rdbuf();
            try {
                auto mod = FusionModule::deserialize(buf.str());
                if (mod->composition() == A) {
                    std::lock_guard lock(mutex_);
                    ++disk_hits_;
                    return mod;
                }
            } catch (const std::exception&) {
                // Stale or damaged record: fall through to a rebuild.
            }
        }
    }
    ModulePtr mod = build_fresh(A);
    {
        std::lock_guard lock(mutex_);
        ++builds_;
    }
    if (dir) {
        std::error_code ec;
        std::filesystem::create_directories(*dir, ec);
        auto tmp = file;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            out << mod->serialize();
        }
        std::filesystem::rename(tmp, file, ec);
    }
    return mod;
}

ModulePtr ModuleRegistry::get(const Composition& A) {
    std::shared_future<ModulePtr> fut;
    std::promise<ModulePtr> promise;
    bool owner = false;
    {
        std::lock_guard lock(mutex_);
        auto it = modules_.find(A);
        if (it == modules_.end()) {
            fut = promise.get_future().share();
            modules_.emplace(A, fut);
            owner = true;
        } else {
            fut = it->second;
        }
    }
    if (owner) {
        try {
            promise.set_value(load_or_build(A));
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return fut.get();
}

ModuleRegistry& registry() {
    static ModuleRegistry instance;
    return instance;
}

}  // namespace fusion
