#pragma once

#include <fstream>
#include <string>
#include <string_view>

namespace aitax::io {

// Writes to a sibling temp file, flushes, then renames over `path`, so a
// reader never sees a partial artifact. Throws std::runtime_error.
void write_file_atomic(const std::string& path, std::string_view content);

// Streaming variant for large artifacts. Content goes to a temp file that
// replaces `path` on commit(); without commit() the temp file is removed.
class AtomicOutFile {
public:
    explicit AtomicOutFile(const std::string& path);
    ~AtomicOutFile();
    AtomicOutFile(const AtomicOutFile&) = delete;
    AtomicOutFile& operator=(const AtomicOutFile&) = delete;

    std::ostream& stream() { return out_; }
    void commit();

private:
    std::string path_;
    std::string tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

// Creates `dir` and its parents if missing. Throws std::runtime_error.
void ensure_directory(const std::string& dir);

}  // namespace aitax::io
