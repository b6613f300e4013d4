#pragma once

#include "reltax/core.hpp"

#include <zlib.h>

#include <array>
#include <cstring>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

namespace reltax {

/// Reads a text file line by line. gzip input is decompressed transparently;
/// plain files pass through zlib unchanged. Lines may be arbitrarily long.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path)
        : file_(gzopen(path.string().c_str(), "rb"), &gzclose), path_(path) {
        if (!file_) throw ConfigError("cannot open input file: " + path.string());
        gzbuffer(file_.get(), 1 << 17);
    }

    /// Returns false at end of input. The trailing newline is stripped.
    bool next(std::string& line) {
        line.clear();
        while (true) {
            if (pos_ >= len_) {
                if (eof_) return !line.empty();
                int n = gzread(file_.get(), buf_.data(), static_cast<unsigned>(buf_.size()));
                if (n < 0) throw Error("read error in " + path_.string());
                if (n == 0) {
                    eof_ = true;
                    return !line.empty();
                }
                len_ = static_cast<std::size_t>(n);
                pos_ = 0;
            }
            const char* start = buf_.data() + pos_;
            const void* nl = std::memchr(start, '\n', len_ - pos_);
            if (nl != nullptr) {
                auto count = static_cast<std::size_t>(static_cast<const char*>(nl) - start);
                line.append(start, count);
                pos_ += count + 1;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return true;
            }
            line.append(start, len_ - pos_);
            pos_ = len_;
        }
    }

private:
    std::unique_ptr<gzFile_s, int (*)(gzFile)> file_;
    std::filesystem::path path_;
    std::array<char, 1 << 16> buf_{};
    std::size_t pos_ = 0;
    std::size_t len_ = 0;
    bool eof_ = false;
};

/// Calls fn(line, line_number) for every line of the file.
inline void for_each_line(const std::filesystem::path& path,
                          const std::function<void(std::string_view, std::size_t)>& fn) {
    LineReader reader(path);
    std::string line;
    std::size_t n = 0;
    while (reader.next(line)) fn(line, ++n);
}

} // namespace reltax
