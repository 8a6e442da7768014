#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "homolog/couples.hpp"
#include "homolog/ltc.hpp"

namespace homolog::io {

inline constexpr const char* kSchema = "homolog/1";

enum ExitCode : int { kOk = 0, kSchemaError = 2, kAuditFailure = 3, kOperationError = 4 };

// Input that does not match its schema: malformed JSON, wrong kind, maps of the wrong type.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised after the report is complete when an audit inside it failed.
struct AuditFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// {"schema": "homolog/1", "kind": kind} merged with body.
json stamp(const std::string& kind, json body);
// Throws SchemaError unless j carries the schema tag and, when kind is non-empty, that kind.
void expect_schema(const json& j, const std::string& kind = "");
json parse_json_text(const std::string& text);
json read_json_file(const std::string& path);
// Two-space indent, trailing newline; keys come out sorted.
std::string dump(const json& j);

// "sets,groups[,mor_cap[,pair_stride]]"
Bounds parse_bounds(const std::string& s);
// "n_lo:n_hi,p_lo:p_hi"
Window parse_window(const std::string& s);
// HOMOLOG_SEED, or fallback when unset.
std::uint64_t seed_from_env(std::uint64_t fallback = 1);

std::vector<std::string> instance_names();
std::vector<std::string> command_names();

struct Options {
    std::string instance;
    json input;               // null when the command takes none
    std::string op;
    Bounds bounds;
    int r_max = 4;
    std::optional<Window> window;
    bool audit = true;
    std::uint64_t seed = 1;
};

struct Outcome {
    json report;
    std::map<std::string, std::string> dot;  // file name -> DOT text
    int status = kOk;
    std::string message;
};

// Runs one command; never throws. Schema problems give status 2 and an error report, failed audits
// status 3 with the full report, anything else raised by the library status 4.
Outcome run(const std::string& command, const Options& opt);

// Report JSON into out_dir/<command>.json plus the DOT files; stdout when out_dir is empty.
void write_outcome(const std::string& command, const Outcome& out, const std::string& out_dir);

// ---- DOT ---------------------------------------------------------------------------------------

// Accepts reports of kind lattice, nsb-lattice, subquotient, factorisation and page; throws
// std::invalid_argument for anything else.
std::string emit_dot(const json& report);

std::string dot_hasse(const FinLattice& l, const std::vector<std::string>& labels);

}  // namespace homolog::io
