#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wordlelab/experiment.hpp"

namespace wordlelab {

/// Column order of the guess-event table (CSV header and JSONL keys).
const std::vector<std::string>& event_columns();

/// Column order of the participant table.
const std::vector<std::string>& participant_columns();

struct ExportFiles {
    std::string events_csv;
    std::string events_jsonl;
    std::string participants_csv;
    std::string participants_jsonl;
};

/**
 * Anonymized export. Sessions are keyed P00001, P00002, ... in creation order;
 * raw session tokens never leave the service. Output is a pure function of the
 * session records, so re-exporting the same store is byte-identical.
 */
ExportFiles export_sessions(std::span<const SessionRecord> sessions);

/// Writes events.csv, events.jsonl, participants.csv and participants.jsonl into `dir`.
void write_export(const ExportFiles& files, const std::filesystem::path& dir);

/// Shortest round-trip decimal form, as used in every exported number.
std::string format_number(double v);

/// RFC 4180 quoting when the field contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

}  // namespace wordlelab
