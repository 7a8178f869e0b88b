#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "qlens/bundle.hpp"
#include "qlens/errors.hpp"

namespace qlens {

// Append-only bundle store. Each bundle is one canonical-JSON file
// <dir>/<id>.json, written to a temporary name and renamed into place so a
// reader never sees a partial file. An empty directory means memory only.
class BundleStore {
public:
    struct Entry {
        std::shared_ptr<const AnalysisBundle> bundle;
        std::shared_ptr<const std::string> bytes;  // canonical serialization
    };

    BundleStore() = default;
    explicit BundleStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        if (dir_.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create store directory " + dir_.string() + ": " + ec.message());
    }

    const std::filesystem::path& directory() const noexcept { return dir_; }

    // Stores `bundle` unless its id is already present. Returns the stored entry
    // and whether this call inserted it.
    std::pair<Entry, bool> put(AnalysisBundle bundle) {
        {
            std::shared_lock lock(mutex_);
            if (auto it = index_.find(bundle.id); it != index_.end()) return {it->second, false};
        }
        auto bytes = std::make_shared<const std::string>(io::canonical_bytes(bundle));
        const std::string id = bundle.id;
        Entry entry{std::make_shared<const AnalysisBundle>(std::move(bundle)), bytes};

        std::unique_lock lock(mutex_);
        if (auto it = index_.find(id); it != index_.end()) return {it->second, false};
        if (!dir_.empty() && !std::filesystem::exists(path_for(id))) write_atomically(id, *bytes);
        index_.emplace(id, entry);
        return {entry, true};
    }

    // Looks up an id in memory, then on disk.
    std::optional<Entry> get(const std::string& id) {
        if (!valid_id(id)) return std::nullopt;
        {
            std::shared_lock lock(mutex_);
            if (auto it = index_.find(id); it != index_.end()) return it->second;
        }
        if (dir_.empty()) return std::nullopt;
        const auto path = path_for(id);
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream buf;
        buf << in.rdbuf();
        AnalysisBundle bundle = io::bundle_from_bytes(buf.str());
        if (bundle.id != id) throw SchemaError("stored bundle " + path.string() + " has id " + bundle.id);
        auto bytes = std::make_shared<const std::string>(io::canonical_bytes(bundle));
        Entry entry{std::make_shared<const AnalysisBundle>(std::move(bundle)), bytes};
        std::unique_lock lock(mutex_);
        return index_.emplace(id, entry).first->second;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return index_.size();
    }

    static bool valid_id(const std::string& id) {
        if (id.empty() || id.size() > 64) return false;
        for (char c : id)
            if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
        return true;
    }

private:
    std::filesystem::path path_for(const std::string& id) const { return dir_ / (id + ".json"); }

    void write_atomically(const std::string& id, const std::string& bytes) const {
        const auto final_path = path_for(id);
        auto tmp = final_path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot write " + tmp.string());
            out << bytes;
            out.flush();
            if (!out) throw IoError("short write to " + tmp.string());
        }
        std::error_code ec;
        std::filesystem::rename(tmp, final_path, ec);
        if (ec) throw IoError("cannot publish " + final_path.string() + ": " + ec.message());
    }

    std::filesystem::path dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, Entry> index_;
};

} // namespace qlens
