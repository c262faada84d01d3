#pragma once

#include <string>

#include "lpwave/field.hpp"
#include "lpwave/norms.hpp"

namespace lpwave {

/// Flat binary field container: one JSON header line (grid metadata,
/// representation, component count) terminated by '\n', then interleaved
/// little-endian float64 re/im pairs in storage order.
void write_field(const std::string& path, const SpaceTimeField& u);
SpaceTimeField read_field(const std::string& path);
void write_field(const std::string& path, const SpatialField& f);
SpatialField read_spatial_field(const std::string& path);

/// FNV-1a 64-bit content hash of a field's coefficient bytes; embedded in
/// reports for provenance.
std::uint64_t content_hash(const SpaceTimeField& u);
std::uint64_t content_hash(const SpatialField& u);

/// Deterministic float formatting used by every CSV/JSON writer ("%.17g").
std::string format_double(double v);

/// CSV export of a dyadic norm table: columns norm,lambda,d,value.
void write_norm_table_csv(const std::string& path, const DyadicNormTable& table);
void write_norm_table_json(const std::string& path, const DyadicNormTable& table,
                           const std::string& resolved_config, std::uint64_t input_hash);

/// CSV of per-time-slice values (column names fixed by the caller).
void write_profile_csv(const std::string& path, const std::string& value_name,
                       double dt, const std::vector<double>& values);
void write_profiles_csv(const std::string& path, const std::vector<std::string>& names,
                        double dt, const std::vector<std::vector<double>>& columns);

}  // namespace lpwave
