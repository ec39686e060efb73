#include "gridrisk/lp.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "gridrisk/errors.hpp"

namespace gridrisk {

const char* to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::base: return "base";
        case ModelFamily::biobj_cvar: return "biobj_cvar";
        case ModelFamily::biobj_lolp: return "biobj_lolp";
    }
    return "?";
}

ModelFamily model_family_from_string(const std::string& s) {
    if (s == "base") return ModelFamily::base;
    if (s == "biobj_cvar") return ModelFamily::biobj_cvar;
    if (s == "biobj_lolp") return ModelFamily::biobj_lolp;
    throw ArgumentError("unknown model family: " + s);
}

int ExtensiveFormInstance::add_variable(VarKind kind, double lower, double upper,
                                        double objective, std::string label) {
    if (kind == VarKind::binary && (lower < 0.0 || upper > 1.0)) {
        throw ArgumentError("binary variable '" + label + "' must have bounds within [0,1]");
    }
    if (lower > upper) {
        throw ArgumentError("variable '" + label + "' has crossing bounds");
    }
    VarRecord v;
    v.kind = kind;
    v.lower = lower;
    v.upper = upper;
    v.objective = objective;
    v.label = std::move(label);
    vars_.push_back(std::move(v));
    return static_cast<int>(vars_.size()) - 1;
}

int ExtensiveFormInstance::add_row(RowSense sense, double rhs, std::string label) {
    RowRecord r;
    r.sense = sense;
    r.rhs = rhs;
    r.label = std::move(label);
    rows_.push_back(std::move(r));
    return static_cast<int>(rows_.size()) - 1;
}

void ExtensiveFormInstance::add_entry(int row, int col, double coeff) {
    if (row < 0 || row >= row_count() || col < 0 || col >= variable_count()) {
        throw ArgumentError("matrix entry outside the instance");
    }
    const std::uint64_t key =
        (static_cast<std::uint64_t>(row) << 32) | static_cast<std::uint32_t>(col);
    if (!entry_keys_.insert(key).second) {
        throw ArgumentError("duplicate matrix entry at row " + rows_[row].label +
                            ", column " + vars_[col].label);
    }
    if (coeff == 0.0) return;
    entries_.push_back({row, col, coeff});
}

int ExtensiveFormInstance::find_variable(const std::string& label) const {
    for (int i = 0; i < variable_count(); ++i) {
        if (vars_[i].label == label) return i;
    }
    return -1;
}

namespace {

std::string fixed_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void mps_line(std::ostream& out, const std::string& f1, const std::string& f2,
              const std::string& f3 = "", const std::string& f4 = "",
              const std::string& f5 = "", const std::string& f6 = "") {
    // classic fixed field positions 2, 5, 15, 25, 40, 50 (1-based)
    std::string line(61, ' ');
    auto put = [&](std::size_t pos, const std::string& s) {
        for (std::size_t i = 0; i < s.size() && pos - 1 + i < line.size(); ++i) {
            line[pos - 1 + i] = s[i];
        }
    };
    put(2, f1);
    put(5, f2);
    put(15, f3);
    put(25, f4);
    put(40, f5);
    put(50, f6);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
}

}  // namespace

void ExtensiveFormInstance::write_mps(std::ostream& out, const std::string& name) const {
    out << "NAME          " << name << '\n';
    out << "ROWS\n";
    mps_line(out, "N", "COST");
    for (const auto& row : rows_) {
        const char* sense = row.sense == RowSense::le ? "L"
                            : row.sense == RowSense::ge ? "G"
                                                        : "E";
        mps_line(out, sense, row.label);
    }

    // column-major entry lists
    std::vector<std::vector<std::pair<int, double>>> cols(vars_.size());
    for (const auto& e : entries_) cols[e.col].push_back({e.row, e.coeff});

    out << "COLUMNS\n";
    bool in_integer_block = false;
    int marker = 0;
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        const bool integral = vars_[j].kind == VarKind::binary;
        if (integral && !in_integer_block) {
            mps_line(out, "", "M" + std::to_string(marker++), "'MARKER'", "", "'INTORG'");
            in_integer_block = true;
        } else if (!integral && in_integer_block) {
            mps_line(out, "", "M" + std::to_string(marker++), "'MARKER'", "", "'INTEND'");
            in_integer_block = false;
        }
        if (vars_[j].objective != 0.0) {
            mps_line(out, "", vars_[j].label, "COST", fixed_num(vars_[j].objective));
        }
        for (const auto& [row, coeff] : cols[j]) {
            mps_line(out, "", vars_[j].label, rows_[row].label, fixed_num(coeff));
        }
        if (vars_[j].objective == 0.0 && cols[j].empty()) {
            // keep empty columns visible to downstream readers
            mps_line(out, "", vars_[j].label, "COST", "0.0");
        }
    }
    if (in_integer_block) {
        mps_line(out, "", "M" + std::to_string(marker++), "'MARKER'", "", "'INTEND'");
    }

    out << "RHS\n";
    for (const auto& row : rows_) {
        if (row.rhs != 0.0) {
            mps_line(out, "", "RHS", row.label, fixed_num(row.rhs));
        }
    }

    out << "BOUNDS\n";
    for (const auto& v : vars_) {
        const bool lower_free = std::isinf(v.lower);
        const bool upper_free = std::isinf(v.upper);
        if (lower_free && upper_free) {
            mps_line(out, "FR", "BND", v.label);
            continue;
        }
        if (v.lower == v.upper) {
            mps_line(out, "FX", "BND", v.label, fixed_num(v.lower));
            continue;
        }
        if (lower_free) {
            mps_line(out, "MI", "BND", v.label);
        } else if (v.lower != 0.0) {
            mps_line(out, "LO", "BND", v.label, fixed_num(v.lower));
        }
        if (!upper_free) {
            mps_line(out, "UP", "BND", v.label, fixed_num(v.upper));
        }
    }
    out << "ENDATA\n";
}

}  // namespace gridrisk
