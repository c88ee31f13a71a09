#include "pyreline/trace.hpp"

#include "pyreline/errors.hpp"
#include "pyreline/metrics.hpp"

#include "json.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace pyreline {

namespace {

const char* const kHeader = "n,added,vertices,burning,density,source";

std::string source_text(VertexId v)
{
    return v == kPass ? std::string("PASS") : std::to_string(v);
}

template <class F>
void for_each_kept(std::span<const TurnRecord> trace, bool subsample, F&& f)
{
    const bool thin = subsample && !trace.empty() && trace.back().turn > kSubsampleAbove;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (!thin || i + 1 == trace.size() || keep_when_subsampled(trace[i].turn))
            f(trace[i]);
    }
}

} // namespace

std::string format_density(std::uint64_t burning, std::uint64_t vertices)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", density(burning, vertices));
    return buf;
}

bool keep_when_subsampled(Turn n)
{
    if (n <= 1000)
        return true;
    const Turn stride = (n + 999) / 1000;
    return n % stride == 0;
}

void write_trace_csv(std::ostream& out, std::span<const TurnRecord> trace, bool subsample)
{
    out << kHeader << '\n';
    for_each_kept(trace, subsample, [&](const TurnRecord& r) {
        out << r.turn << ',' << r.added << ',' << r.vertex_total << ',' << r.burning_total << ','
            << format_density(r.burning_total, r.vertex_total) << ',' << source_text(r.source) << '\n';
    });
}

void write_trace_jsonl(std::ostream& out, std::span<const TurnRecord> trace, bool subsample)
{
    for_each_kept(trace, subsample, [&](const TurnRecord& r) {
        nlohmann::json j = {
            {"n", r.turn},
            {"added", r.added},
            {"vertices", r.vertex_total},
            {"burning", r.burning_total},
            {"density", std::stod(format_density(r.burning_total, r.vertex_total))},
        };
        if (r.source == kPass)
            j["source"] = "PASS";
        else
            j["source"] = r.source;
        out << j.dump() << '\n';
    });
}

std::vector<TurnRecord> read_trace_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
        fail(ErrorCode::ConfigError, "trace: missing header");
    std::vector<TurnRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string n, added, vertices, burning, dens, source;
        if (!std::getline(fields, n, ',') || !std::getline(fields, added, ',') || !std::getline(fields, vertices, ',') ||
            !std::getline(fields, burning, ',') || !std::getline(fields, dens, ',') || !std::getline(fields, source))
            fail(ErrorCode::ConfigError, "trace line " + std::to_string(line_no) + ": expected 6 fields");
        try {
            TurnRecord r;
            r.turn = std::stoll(n);
            r.added = std::stoull(added);
            r.vertex_total = std::stoull(vertices);
            r.burning_total = std::stoull(burning);
            r.source = source == "PASS" ? kPass : static_cast<VertexId>(std::stoul(source));
            out.push_back(r);
        } catch (const std::logic_error&) {
            fail(ErrorCode::ConfigError, "trace line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return out;
}

} // namespace pyreline
