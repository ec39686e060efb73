#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

namespace gridrisk {

enum class VarKind { continuous, binary };
enum class RowSense { le, ge, eq };
enum class ModelFamily { base, biobj_cvar, biobj_lolp };

const char* to_string(ModelFamily family);
ModelFamily model_family_from_string(const std::string& s);

struct VarRecord {
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    double objective = 0.0;
    std::string label;
};

struct RowRecord {
    RowSense sense = RowSense::le;
    double rhs = 0.0;
    std::string label;
};

struct MatrixEntry {
    int row = 0;
    int col = 0;
    double coeff = 0.0;
};

// Maps an instance variable to its slot in a FleetDecision.
struct FirstStageVar {
    int var_index = 0;
    int fleet_index = 0;
    int slot = 0;
    bool binary = true;
    std::string gen_id;
};

struct InstanceMeta {
    double lambda = 0.0;
    double alpha = 0.0;
    double bound_u = std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> scenario_seeds_n1;
    std::vector<std::uint64_t> scenario_seeds_n2;
    std::vector<double> big_m;
    std::vector<std::string> warnings;
    std::vector<FirstStageVar> first_stage;
    int binary_slots = 0;
    int continuous_slots = 0;
};

// Sparse LP/MIP built from a model family and scenario samples. Immutable
// once built apart from bound tightening via fix_partial_fleet.
class ExtensiveFormInstance {
public:
    ModelFamily family = ModelFamily::base;
    InstanceMeta meta;

    int add_variable(VarKind kind, double lower, double upper, double objective,
                     std::string label);
    int add_row(RowSense sense, double rhs, std::string label);
    void add_entry(int row, int col, double coeff);  // rejects duplicate (row, col)

    int variable_count() const { return static_cast<int>(vars_.size()); }
    int row_count() const { return static_cast<int>(rows_.size()); }
    const std::vector<VarRecord>& variables() const { return vars_; }
    const std::vector<RowRecord>& rows() const { return rows_; }
    const std::vector<MatrixEntry>& entries() const { return entries_; }

    VarRecord& variable(int index) { return vars_.at(index); }
    const VarRecord& variable(int index) const { return vars_.at(index); }
    int find_variable(const std::string& label) const;  // -1 if absent

    // Fixed-format MPS with the documented label scheme.
    void write_mps(std::ostream& out, const std::string& name = "GRIDRISK") const;

private:
    std::vector<VarRecord> vars_;
    std::vector<RowRecord> rows_;
    std::vector<MatrixEntry> entries_;
    std::unordered_set<std::uint64_t> entry_keys_;
};

}  // namespace gridrisk
