#pragma once

#include "error.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace llna {

struct FetchedDocument {
    std::string text;
    bool markers_found = false;  // false: header/footer markers missing, full text returned
    bool from_cache = false;
};

namespace detail {

inline bool is_marker_line(std::string_view line, std::string_view kind) {
    // "*** START OF THE PROJECT GUTENBERG EBOOK ..." / "*** END OF THIS PROJECT GUTENBERG EBOOK ..."
    std::string upper(line);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    const auto first = upper.find_first_not_of(" \t");
    if (first == std::string::npos || upper.compare(first, 3, "***") != 0) return false;
    return upper.find(std::string(kind) + " OF TH") != std::string::npos &&
           upper.find("PROJECT GUTENBERG") != std::string::npos;
}

}  // namespace detail

/// Returns the text strictly between the repository start and end marker
/// lines. When either marker is missing the full text comes back with
/// `markers_found == false`.
inline FetchedDocument strip_boilerplate(std::string_view raw) {
    std::size_t start = std::string_view::npos, end = std::string_view::npos;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        std::size_t eol = raw.find('\n', pos);
        const std::size_t next = eol == std::string_view::npos ? raw.size() : eol + 1;
        const auto line = raw.substr(pos, next - pos);
        if (start == std::string_view::npos && detail::is_marker_line(line, "START")) {
            start = next;
        } else if (start != std::string_view::npos && detail::is_marker_line(line, "END")) {
            end = pos;
            break;
        }
        pos = next;
    }
    FetchedDocument doc;
    if (start == std::string_view::npos || end == std::string_view::npos) {
        doc.text = std::string(raw);
        return doc;
    }
    doc.text = std::string(raw.substr(start, end - start));
    doc.markers_found = true;
    return doc;
}

/// Fetches remote documents through an on-disk cache (one file per id).
class DocumentCache {
  public:
    using Downloader = std::function<std::optional<std::string>(const std::string& id)>;

    DocumentCache(std::filesystem::path dir, Downloader downloader)
        : dir_(std::move(dir)), downloader_(std::move(downloader)) {}

    std::filesystem::path path_for(const std::string& id) const { return dir_ / (id + ".txt"); }

    bool contains(const std::string& id) const { return std::filesystem::exists(path_for(id)); }

    FetchedDocument fetch(const std::string& id) {
        if (auto cached = read_cached(id)) {
            auto doc = strip_boilerplate(*cached);
            doc.from_cache = true;
            return doc;
        }
        std::optional<std::string> raw = downloader_ ? downloader_(id) : std::nullopt;
        if (!raw) throw Error(ErrorKind::fetch, "cannot fetch document " + id + " and no cached copy in " + dir_.string());
        store(id, *raw);
        return strip_boilerplate(*raw);
    }

  private:
    std::optional<std::string> read_cached(const std::string& id) const {
        std::ifstream in(path_for(id), std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void store(const std::string& id, const std::string& raw) {
        std::lock_guard lock(lock_for(id));
        std::filesystem::create_directories(dir_);
        const auto final_path = path_for(id);
        const auto tmp = dir_ / (id + ".txt.part");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error(ErrorKind::fetch, "cannot write cache file " + tmp.string());
            out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
        }
        std::filesystem::rename(tmp, final_path);
    }

    static std::mutex& lock_for(const std::string& id) {
        static std::mutex registry_mutex;
        static std::map<std::string, std::mutex> locks;
        std::lock_guard lock(registry_mutex);
        return locks[id];
    }

    std::filesystem::path dir_;
    Downloader downloader_;
};

}  // namespace llna
