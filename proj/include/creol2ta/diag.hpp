#pragma once

#include <string>
#include <vector>

namespace creol2ta {

struct SourceLoc {
    int line = 0;  // 1-based, 0 = unknown
    int col = 0;
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
    Severity severity = Severity::Error;
    SourceLoc loc;
    std::string message;
    std::string file;
};

/// Accumulates diagnostics; validation passes never abort on the first error.
class DiagnosticList {
public:
    void error(SourceLoc loc, std::string msg, std::string file = {}) {
        items_.push_back({Severity::Error, loc, std::move(msg), std::move(file)});
    }
    void warning(SourceLoc loc, std::string msg, std::string file = {}) {
        items_.push_back({Severity::Warning, loc, std::move(msg), std::move(file)});
    }
    void note(SourceLoc loc, std::string msg, std::string file = {}) {
        items_.push_back({Severity::Note, loc, std::move(msg), std::move(file)});
    }
    void append(const DiagnosticList& other) {
        items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    }

    bool has_errors() const {
        for (const auto& d : items_)
            if (d.severity == Severity::Error) return true;
        return false;
    }
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }

    const std::vector<Diagnostic>& items() const { return items_; }

    std::string to_string() const;

private:
    std::vector<Diagnostic> items_;
};

std::string to_string(const Diagnostic& d);

}  // namespace creol2ta
