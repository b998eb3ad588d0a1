#include "snndyn/snapshot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace snndyn {

namespace {

void append_double(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);  // shortest form that round-trips exactly
}

void append_int(std::string& out, long long value) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

// Cursor over the snapshot text tracking section and line for diagnostics.
struct Reader {
    std::istream& in;
    std::string section = "header";
    std::size_t lineno = 0;
    std::string line{};

    [[noreturn]] void corrupt(const std::string& what) const {
        throw std::runtime_error("corrupt snapshot [" + section + " line " +
                                 std::to_string(lineno) + "]: " + what);
    }

    bool next_line() {
        if (!std::getline(in, line)) return false;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    const std::string& required_line(const std::string& what) {
        if (!next_line()) corrupt("unexpected end of file, expected " + what);
        return line;
    }
};

std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
        const std::size_t begin = i;
        while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
        if (i > begin) fields.push_back(text.substr(begin, i - begin));
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

long long header_value(Reader& reader, const std::string& key) {
    const auto fields = split_ws(reader.required_line("header field '" + key + "'"));
    if (fields.size() != 2 || fields[0] != key)
        reader.corrupt("expected header field '" + key + "'");
    long long value = 0;
    if (!parse_number(fields[1], value)) reader.corrupt("invalid value for '" + key + "'");
    return value;
}

void expect_section(Reader& reader, const std::string& name) {
    const std::string got = reader.required_line("section [" + name + "]");
    if (got != "[" + name + "]") reader.corrupt("expected section [" + name + "]");
    reader.section = name;
}

}  // namespace

std::size_t save_state(const EngineState& state, std::ostream& out) {
    std::string text;
    text.reserve(256 + state.dataset.size() * (16 + 24ull * state.dataset.dim()));

    text += kSnapshotMagic;
    text += ' ';
    append_int(text, kSnapshotVersion);
    text += "\ndim ";
    append_int(text, state.dataset.dim());
    text += "\npoints ";
    append_int(text, static_cast<long long>(state.dataset.size()));
    text += "\nk ";
    append_int(text, state.params.k);
    text += "\nw ";
    append_int(text, state.params.w);
    text += "\nsim_threshold ";
    append_int(text, state.params.sim_threshold);
    text += "\ncore_threshold ";
    append_int(text, state.params.core_threshold);
    text += "\nnext_id ";
    append_int(text, state.dataset.next_id());
    text += '\n';

    text += "[points]\n";
    for (PointId id : state.dataset.ids()) {
        append_int(text, id);
        for (double c : state.dataset.point(id).coords) {
            text += ' ';
            append_double(text, c);
        }
        text += '\n';
    }

    text += "[wlists]\n";
    for (PointId id : state.dataset.ids()) {
        append_int(text, id);
        for (const NeighborEntry& e : state.wlists.at(id).entries) {
            text += ' ';
            append_int(text, e.id);
            text += ':';
            append_double(text, e.dist);
        }
        text += '\n';
    }

    text += "[adjacency]\n";
    for (const auto& [a, b, weight] : state.graph.canonical_edges()) {
        append_int(text, a);
        text += ' ';
        append_int(text, b);
        text += ' ';
        append_int(text, weight);
        text += '\n';
    }

    text += "[labels]\n";
    for (PointId id : state.dataset.ids()) {
        const PointAssignment& pa = state.assignment.points.at(id);
        append_int(text, id);
        text += ' ';
        if (pa.label == kOutlier)
            text += "OUTLIER";
        else
            append_int(text, pa.label);
        text += pa.is_core ? " 1\n" : " 0\n";
    }

    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("snapshot write failed");
    return text.size();
}

EngineState load_state(std::istream& in) {
    Reader reader{in};

    // Magic and version gate everything else.
    {
        const std::string first = reader.required_line("magic");
        const auto fields = split_ws(first);
        if (fields.empty() || fields[0] != kSnapshotMagic)
            throw std::runtime_error("unsupported snapshot: bad magic");
        int version = 0;
        if (fields.size() != 2 || !parse_number(fields[1], version))
            throw std::runtime_error("unsupported snapshot: missing version");
        if (version != kSnapshotVersion)
            throw std::runtime_error("unsupported snapshot: version " +
                                     std::string(fields[1]));
    }

    const long long dim = header_value(reader, "dim");
    const long long point_count = header_value(reader, "points");
    Params params;
    params.k = static_cast<int>(header_value(reader, "k"));
    params.w = static_cast<int>(header_value(reader, "w"));
    params.sim_threshold = static_cast<int>(header_value(reader, "sim_threshold"));
    params.core_threshold = static_cast<int>(header_value(reader, "core_threshold"));
    const long long next_id = header_value(reader, "next_id");
    if (dim < 1) reader.corrupt("dim must be positive");
    if (point_count < 0) reader.corrupt("negative point count");
    try {
        params.validate();
    } catch (const std::exception& e) {
        reader.corrupt(e.what());
    }
    if (point_count < params.k + 1) reader.corrupt("fewer than k+1 points");

    expect_section(reader, "points");
    std::vector<PointId> ids;
    std::vector<double> coords;
    ids.reserve(point_count);
    coords.reserve(point_count * dim);
    for (long long row = 0; row < point_count; ++row) {
        const auto fields = split_ws(reader.required_line("point row"));
        if (fields.size() != static_cast<std::size_t>(dim) + 1)
            reader.corrupt("point row needs id plus " + std::to_string(dim) + " coordinates");
        PointId id = 0;
        if (!parse_number(fields[0], id)) reader.corrupt("invalid point id");
        for (long long c = 0; c < dim; ++c) {
            double value = 0.0;
            if (!parse_number(fields[c + 1], value) || !std::isfinite(value))
                reader.corrupt("invalid coordinate");
            coords.push_back(value);
        }
        ids.push_back(id);
    }
    Dataset dataset;
    try {
        dataset =
            Dataset::restore(static_cast<int>(dim), std::move(ids), std::move(coords), next_id);
    } catch (const std::exception& e) {
        reader.corrupt(e.what());
    }

    EngineState state;
    state.dataset = std::move(dataset);
    state.params = params;

    expect_section(reader, "wlists");
    state.wlists.reserve(point_count);
    for (long long row = 0; row < point_count; ++row) {
        const auto fields = split_ws(reader.required_line("w-list row"));
        if (fields.empty()) reader.corrupt("empty w-list row");
        PointId owner = 0;
        if (!parse_number(fields[0], owner)) reader.corrupt("invalid w-list owner");
        if (owner != state.dataset.ids()[row])
            reader.corrupt("w-list rows must follow point order");
        NeighborList list;
        list.owner = owner;
        list.entries.reserve(fields.size() - 1);
        for (std::size_t f = 1; f < fields.size(); ++f) {
            const std::string_view token = fields[f];
            const std::size_t colon = token.find(':');
            if (colon == std::string_view::npos) reader.corrupt("entry must be id:distance");
            NeighborEntry entry;
            if (!parse_number(token.substr(0, colon), entry.id))
                reader.corrupt("invalid neighbor id");
            if (!parse_number(token.substr(colon + 1), entry.dist) ||
                !std::isfinite(entry.dist) || entry.dist < 0.0)
                reader.corrupt("invalid neighbor distance");
            if (entry.id == owner) reader.corrupt("list contains its owner");
            if (!state.dataset.contains(entry.id))
                reader.corrupt("list references unknown point " + std::to_string(entry.id));
            if (!list.entries.empty() && !rank_less(list.entries.back(), entry))
                reader.corrupt("entries not strictly sorted by (distance, id)");
            list.entries.push_back(entry);
        }
        const std::size_t max_len =
            std::min<std::size_t>(params.w, static_cast<std::size_t>(point_count) - 1);
        if (list.entries.size() < static_cast<std::size_t>(params.k) ||
            list.entries.size() > max_len)
            reader.corrupt("w-list of point " + std::to_string(owner) +
                           " has invalid length " + std::to_string(list.entries.size()));
        state.wlists.emplace(owner, std::move(list));
    }

    expect_section(reader, "adjacency");
    for (PointId id : state.dataset.ids()) state.graph.add_vertex(id);
    PointId prev_a = -1;
    PointId prev_b = -1;
    while (reader.next_line()) {
        if (reader.line == "[labels]") break;
        const auto fields = split_ws(reader.line);
        if (fields.size() != 3) reader.corrupt("edge row must be 'a b weight'");
        PointId a = 0;
        PointId b = 0;
        int weight = 0;
        if (!parse_number(fields[0], a) || !parse_number(fields[1], b) ||
            !parse_number(fields[2], weight))
            reader.corrupt("invalid edge row");
        if (a >= b) reader.corrupt("edges must list the lower id first");
        if (std::make_pair(a, b) <= std::make_pair(prev_a, prev_b))
            reader.corrupt("edges must be strictly sorted");
        prev_a = a;
        prev_b = b;
        if (!state.dataset.contains(a) || !state.dataset.contains(b))
            reader.corrupt("edge references unknown point");
        if (weight < params.sim_threshold)
            reader.corrupt("edge weight below sim_threshold");
        if (weight > params.k) reader.corrupt("edge weight exceeds k");
        state.graph.set_edge(a, b, weight);
    }
    if (reader.line != "[labels]") reader.corrupt("missing [labels] section");
    reader.section = "labels";

    state.assignment.points.reserve(point_count);
    for (long long row = 0; row < point_count; ++row) {
        const auto fields = split_ws(reader.required_line("label row"));
        if (fields.size() != 3) reader.corrupt("label row must be 'id label core'");
        PointId id = 0;
        if (!parse_number(fields[0], id)) reader.corrupt("invalid label row id");
        if (id != state.dataset.ids()[row]) reader.corrupt("label rows must follow point order");
        PointAssignment pa;
        if (fields[1] == "OUTLIER") {
            pa.label = kOutlier;
        } else if (!parse_number(fields[1], pa.label) || pa.label < 0) {
            reader.corrupt("invalid cluster label");
        }
        if (fields[2] == "1")
            pa.is_core = true;
        else if (fields[2] != "0")
            reader.corrupt("core flag must be 0 or 1");
        if (pa.label == kOutlier && pa.is_core) reader.corrupt("outlier cannot be core");
        state.assignment.points.emplace(id, pa);
    }
    while (reader.next_line())
        if (!reader.line.empty()) reader.corrupt("trailing content after labels");

    // Cross-section label checks: a cluster label must be one of its own
    // cluster's core points, and canonical labels never exceed member ids
    // of cores.
    reader.section = "labels";
    for (const auto& [id, pa] : state.assignment.points) {
        if (pa.label == kOutlier) continue;
        const auto it = state.assignment.points.find(pa.label);
        if (it == state.assignment.points.end())
            reader.corrupt("label " + std::to_string(pa.label) + " is not a point");
        if (!it->second.is_core || it->second.label != pa.label)
            reader.corrupt("label " + std::to_string(pa.label) +
                           " is not a canonical core label");
        if (pa.is_core && pa.label > id)
            reader.corrupt("core " + std::to_string(id) + " carries non-minimal label");
    }
    return state;
}

}  // namespace snndyn
