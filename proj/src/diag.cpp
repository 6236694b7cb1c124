#include "creol2ta/diag.hpp"

#include <sstream>

namespace creol2ta {

std::string to_string(const Diagnostic& d) {
    std::ostringstream os;
    if (!d.file.empty()) os << d.file << ":";
    if (d.loc.line > 0) {
        os << d.loc.line;
        if (d.loc.col > 0) os << ":" << d.loc.col;
        os << ": ";
    } else if (!d.file.empty()) {
        os << " ";
    }
    switch (d.severity) {
        case Severity::Error: os << "error: "; break;
        case Severity::Warning: os << "warning: "; break;
        case Severity::Note: os << "note: "; break;
    }
    os << d.message;
    return os.str();
}

std::string DiagnosticList::to_string() const {
    std::ostringstream os;
    for (const auto& d : items_) os << creol2ta::to_string(d) << "\n";
    return os.str();
}

}  // namespace creol2ta
