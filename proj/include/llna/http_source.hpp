#pragma once

// HTTP downloader for Project Gutenberg plain-text files. Kept apart from
// fetch.hpp so that only binaries that actually download link OpenSSL.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <optional>
#include <string>

namespace llna {

inline std::optional<std::string> gutenberg_download(const std::string& id) {
    httplib::Client client("https://www.gutenberg.org");
    client.set_follow_location(true);
    client.set_connection_timeout(15);
    client.set_read_timeout(60);
    for (const std::string& path : {"/cache/epub/" + id + "/pg" + id + ".txt", "/files/" + id + "/" + id + "-0.txt"}) {
        auto res = client.Get(path);
        if (res && res->status == 200 && !res->body.empty()) return res->body;
    }
    return std::nullopt;
}

}  // namespace llna
