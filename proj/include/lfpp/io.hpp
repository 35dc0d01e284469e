#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfpp/bounds.hpp"
#include "lfpp/estimator.hpp"
#include "lfpp/field.hpp"

// Serialization: CSV tables with 12 significant digits, JSONL result records,
// the LFPPFLD1 binary field format with its JSON sidecar, and the FNV-1a
// content hash used by run manifests. Numbers re-emitted after a parse
// reproduce the original text exactly (canonical-form round trip).

namespace lfpp::io {

std::string format_g12(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// minimal CSV: comma-separated, newline rows, no quoting (all fields numeric
// or bare identifiers)
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string bounds_rows_csv(const std::vector<bounds::BoundsRow>& rows);
std::string gamma_rows_csv(const std::vector<bounds::GammaRow>& rows);
std::vector<bounds::BoundsRow> parse_bounds_rows_csv(const std::string& text);
std::vector<bounds::GammaRow> parse_gamma_rows_csv(const std::string& text);

// two-column (x, y) tables, used for geodesic dumps and overlay curves
std::string xy_csv(const std::vector<std::pair<double, double>>& points,
                   const std::string& xname, const std::string& yname);
std::vector<std::pair<double, double>> parse_xy_csv(const std::string& text);

std::string crossing_record_json(const estimate::CrossingRecord& rec, bool with_geodesic);
estimate::CrossingRecord parse_crossing_record(const std::string& line);
std::string census_record_json(const estimate::CensusRecord& rec);
estimate::CensusRecord parse_census_record(const std::string& line);

std::vector<std::string> read_lines(const std::string& path);

// flat binary field: 16-byte header (magic "LFPPFLD1", k as u32 LE, sampler
// enum u8, 3 zero bytes), then row-major little-endian doubles; the sidecar
// at path + ".json" carries seed, padding and normalization
void write_field_file(const std::string& path, const field::FieldSample& sample);
field::FieldSample read_field_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace lfpp::io
