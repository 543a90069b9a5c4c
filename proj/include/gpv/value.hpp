#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gpv {

// A label atom: an integer or a string.
struct Atom {
    bool isInt = true;
    long long num = 0;
    std::string str;

    static Atom ofInt(long long n) { return Atom{true, n, {}}; }
    static Atom ofStr(std::string s) { return Atom{false, 0, std::move(s)}; }

    bool operator==(const Atom& o) const {
        return isInt == o.isInt && (isInt ? num == o.num : str == o.str);
    }
    bool operator<(const Atom& o) const {
        if (isInt != o.isInt) return isInt;  // ints before strings
        return isInt ? num < o.num : str < o.str;
    }
};

// A label: a possibly empty sequence of atoms.
using ListValue = std::vector<Atom>;

std::string to_string(const Atom& a);
std::string to_string(const ListValue& l);

// Marks for nodes and edges. Any is only legal in rule graphs / formulas.
enum class Mark { None, Red, Green, Blue, Grey, Dashed, Any };

std::string to_string(Mark m);
std::optional<Mark> mark_from_string(const std::string& s);

bool is_node_mark(Mark m);  // excludes Dashed
bool is_edge_mark(Mark m);  // excludes Grey

}  // namespace gpv
