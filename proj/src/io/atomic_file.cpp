#include "io/atomic_file.hpp"

#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <stdexcept>

#include <fcntl.h>
#include <unistd.h>

namespace aitax::io {

namespace fs = std::filesystem;

namespace {

std::string temp_sibling(const std::string& path) {
    static std::atomic<unsigned> counter{0};
    const fs::path target(path);
    const std::string suffix = ".tmp" + std::to_string(::getpid()) + "." + std::to_string(counter++);
    return (target.parent_path() / ("." + target.filename().string() + suffix)).string();
}

}  // namespace

void write_file_atomic(const std::string& path, std::string_view content) {
    const fs::path target(path);
    const fs::path tmp = temp_sibling(path);
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw std::runtime_error("cannot create " + tmp.string() + ": " + std::strerror(errno));
    const char* p = content.data();
    std::size_t left = content.size();
    while (left > 0) {
        const ssize_t n = ::write(fd, p, left);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int err = errno;
            ::close(fd);
            ::unlink(tmp.c_str());
            throw std::runtime_error("cannot write " + tmp.string() + ": " + std::strerror(err));
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) {
        ::unlink(tmp.c_str());
        throw std::runtime_error("cannot flush " + tmp.string());
    }
    if (std::rename(tmp.c_str(), target.c_str()) != 0) {
        const int err = errno;
        ::unlink(tmp.c_str());
        throw std::runtime_error("cannot rename onto " + path + ": " + std::strerror(err));
    }
}

AtomicOutFile::AtomicOutFile(const std::string& path) : path_(path), tmp_(temp_sibling(path)) {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot create " + tmp_);
}

AtomicOutFile::~AtomicOutFile() {
    if (!committed_) {
        out_.close();
        ::unlink(tmp_.c_str());
    }
}

void AtomicOutFile::commit() {
    out_.flush();
    const bool ok = static_cast<bool>(out_);
    out_.close();
    if (!ok) throw std::runtime_error("cannot write " + tmp_);
    const int fd = ::open(tmp_.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd >= 0) {
        ::fsync(fd);
        ::close(fd);
    }
    if (std::rename(tmp_.c_str(), path_.c_str()) != 0)
        throw std::runtime_error("cannot rename onto " + path_ + ": " + std::strerror(errno));
    committed_ = true;
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
    if (!fs::is_directory(dir)) throw std::runtime_error(dir + " is not a directory");
}

}  // namespace aitax::io
