#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "multibump/common.hpp"

namespace multibump {

/// Formats a double with 9 significant digits, the precision used by every
/// CSV this library writes.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// Row oriented CSV assembly with a fixed column count. Cells are appended
/// in order; end_row checks the arity so a malformed table cannot be built.
class CsvWriter {
  public:
    explicit CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
        if (header.empty()) throw ConfigError("csv: header must name at least one column");
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ += ',';
            out_ += quote(header[i]);
        }
        out_ += '\n';
    }

    CsvWriter& cell(double v) { return cell_raw(format_value(v)); }
    CsvWriter& cell(int v) { return cell_raw(std::to_string(v)); }
    CsvWriter& cell(long v) { return cell_raw(std::to_string(v)); }
    CsvWriter& cell(const std::string& v) { return cell_raw(quote(v)); }
    CsvWriter& cell(const char* v) { return cell_raw(quote(v)); }

    void end_row() {
        if (filled_ != columns_)
            throw ConfigError("csv: row has " + std::to_string(filled_) + " cells, expected " +
                              std::to_string(columns_));
        out_ += row_;
        out_ += '\n';
        row_.clear();
        filled_ = 0;
    }

    const std::string& str() const {
        if (filled_ != 0) throw ConfigError("csv: unterminated row");
        return out_;
    }

  private:
    CsvWriter& cell_raw(const std::string& text) {
        if (filled_ == columns_)
            throw ConfigError("csv: too many cells, row holds " + std::to_string(columns_));
        if (filled_) row_ += ',';
        row_ += text;
        ++filled_;
        return *this;
    }

    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        q += '"';
        return q;
    }

    std::size_t columns_;
    std::size_t filled_ = 0;
    std::string row_;
    std::string out_;
};

/// Writes text to path through a temporary file in the same directory, so a
/// reader never observes a half written file and reruns replace atomically.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out.good()) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

}  // namespace multibump
