#include "gpv/value.hpp"

#include <sstream>

namespace gpv {

std::string to_string(const Atom& a) {
    if (a.isInt) return std::to_string(a.num);
    std::string out = "\"";
    out += a.str;
    out += '"';
    return out;
}

std::string to_string(const ListValue& l) {
    if (l.empty()) return "empty";
    std::string out;
    for (size_t i = 0; i < l.size(); ++i) {
        if (i) out += ':';
        out += to_string(l[i]);
    }
    return out;
}

std::string to_string(Mark m) {
    switch (m) {
        case Mark::None: return "none";
        case Mark::Red: return "red";
        case Mark::Green: return "green";
        case Mark::Blue: return "blue";
        case Mark::Grey: return "grey";
        case Mark::Dashed: return "dashed";
        case Mark::Any: return "any";
    }
    return "?";
}

std::optional<Mark> mark_from_string(const std::string& s) {
    if (s == "none") return Mark::None;
    if (s == "red") return Mark::Red;
    if (s == "green") return Mark::Green;
    if (s == "blue") return Mark::Blue;
    if (s == "grey" || s == "gray") return Mark::Grey;
    if (s == "dashed") return Mark::Dashed;
    if (s == "any") return Mark::Any;
    return std::nullopt;
}

bool is_node_mark(Mark m) { return m != Mark::Dashed; }
bool is_edge_mark(Mark m) { return m != Mark::Grey; }

}  // namespace gpv
