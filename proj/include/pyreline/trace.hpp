#pragma once

#include "pyreline/engine.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pyreline {

inline constexpr Turn kSubsampleAbove = 100000;

/// Density with 10 significant digits, as written to traces.
std::string format_density(std::uint64_t burning, std::uint64_t vertices);

/// True if turn n survives geometric subsampling: every turn up to 1000,
/// then every ceil(n/1000)-th.
bool keep_when_subsampled(Turn n);

// CSV header: n,added,vertices,burning,density,source (source is an id or PASS).
// With `subsample`, long traces keep only the turns selected above plus the
// final record.
void write_trace_csv(std::ostream& out, std::span<const TurnRecord> trace, bool subsample = false);
void write_trace_jsonl(std::ostream& out, std::span<const TurnRecord> trace, bool subsample = false);
std::vector<TurnRecord> read_trace_csv(std::istream& in);

} // namespace pyreline
