#include <algorithm>
#include <sstream>

#include "creol2ta/xlate/dump.hpp"

namespace creol2ta::xlate {

namespace {

std::string edge_text(const ta::Edge& e, const ta::Template& t) {
    std::ostringstream os;
    auto lname = [&](int id) {
        const ta::Location* l = t.find_location(id);
        return l ? l->name : "?" + std::to_string(id);
    };
    os << "edge " << lname(e.src) << " -> " << lname(e.dst);
    if (!e.guard.trivially_true()) os << "  guard " << to_string(e.guard);
    if (e.sync) os << "  sync " << to_string(*e.sync);
    if (!e.updates.empty()) {
        os << "  update ";
        for (std::size_t i = 0; i < e.updates.size(); ++i) {
            if (i) os << ", ";
            os << to_string(e.updates[i]);
        }
    }
    if (!e.note.empty()) os << "  ; " << e.note;
    return os.str();
}

void dump_template(std::ostringstream& os, const ta::Template& t, const LocMap* locmap) {
    os << "template " << t.name << " (";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) os << ", ";
        os << "const int " << t.args[i];
    }
    os << ")\n";
    if (!t.locals.constants.empty() || !t.locals.vars.empty() || !t.locals.clocks.empty() ||
        !t.locals.functions.empty()) {
        std::istringstream ls(to_string(t.locals));
        std::string line;
        while (std::getline(ls, line)) os << "  local " << line << "\n";
    }
    std::vector<const ta::Location*> locs;
    for (const auto& l : t.locations) locs.push_back(&l);
    std::sort(locs.begin(), locs.end(),
              [](const ta::Location* a, const ta::Location* b) { return a->id < b->id; });
    for (const ta::Location* l : locs) {
        os << "  location " << l->name;
        if (l->id == t.initial) os << " [initial]";
        if (l->urgency == ta::Urgency::Urgent) os << " [urgent]";
        if (l->urgency == ta::Urgency::Committed) os << " [committed]";
        for (const auto& inv : l->invariant) os << " inv(" << to_string(inv) << ")";
        if (locmap) {
            if (const LocEntry* le = locmap->find(t.name, l->id))
                os << "  ; line " << le->line << ": " << le->stmt;
        }
        os << "\n";
    }
    std::vector<std::string> edges;
    for (const auto& e : t.edges) edges.push_back(edge_text(e, t));
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) os << "  " << e << "\n";
}

}  // namespace

std::string dump_translation(const TranslationResult& res) {
    std::ostringstream os;
    os << "class " << res.class_name << "\n";
    os << "nObj " << res.n_obj << "\n";
    os << "deadline range [" << res.deadlines.min << "," << res.deadlines.max << "] init "
       << res.deadlines.init << "\n";
    os << "tasks:\n";
    for (const auto& t : res.table.tasks) {
        os << "  " << t.id << " " << t.name << (t.is_method ? " method" : " subtask of " + t.method)
           << " enabler " << (t.enabler ? to_string(t.enabler) : "true") << "\n";
    }
    os << "labels:\n";
    for (const auto& [l, id] : res.table.labels) os << "  " << id << " " << l << "\n";
    os << "remote methods:\n";
    for (const auto& [r, id] : res.table.remote_methods) os << "  " << id << " " << r << "\n";
    os << "globals:\n";
    {
        std::istringstream ls(to_string(res.globals));
        std::string line;
        while (std::getline(ls, line)) os << "  " << line << "\n";
    }
    for (const auto& t : res.templates) dump_template(os, t, &res.locmap);
    return os.str();
}

std::string dump_system(const ta::SystemModel& sys) {
    std::ostringstream os;
    os << "globals:\n";
    {
        std::istringstream ls(to_string(sys.globals));
        std::string line;
        while (std::getline(ls, line)) os << "  " << line << "\n";
    }
    for (const auto& t : sys.templates) dump_template(os, t, nullptr);
    os << "system:\n";
    for (const auto& i : sys.instances) {
        os << "  " << i.name << " = " << i.template_name << "(";
        for (std::size_t k = 0; k < i.args.size(); ++k) {
            if (k) os << ", ";
            os << i.args[k];
        }
        os << ")\n";
    }
    return os.str();
}

}  // namespace creol2ta::xlate
