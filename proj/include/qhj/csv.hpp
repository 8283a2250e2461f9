#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "qhj/errors.hpp"

namespace qhj {

/// Shortest decimal string that round-trips to the same double; identical
/// across platforms, which keeps CSV output byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Minimal CSV emitter: UTF-8, LF line endings, mandatory header row.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
        line(header_);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != header_.size())
            throw io_error("csv: row has " + std::to_string(cells.size()) + " cells, header has "
                           + std::to_string(header_.size()));
        line(cells);
    }

    const std::string& text() const { return text_; }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary); // binary keeps LF endings
        if (!out) throw io_error("csv: cannot open '" + path + "' for writing");
        out << text_;
        if (!out) throw io_error("csv: write failed for '" + path + "'");
    }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::vector<std::string> header_;
    std::string text_;
};

} // namespace qhj
