#include "snndyn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace snndyn {

namespace {

bool is_separator(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == ',';
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_separator(line[i])) ++i;
        const std::size_t begin = i;
        while (i < line.size() && !is_separator(line[i])) ++i;
        if (i > begin) fields.push_back(line.substr(begin, i - begin));
    }
    return fields;
}

bool parse_double(std::string_view token, double& out) {
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

bool parse_id(std::string_view token, PointId& out) {
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

bool is_data_line(std::string_view line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c != '#';
    }
    return false;
}

std::string join_ids(const std::vector<PointId>& ids, std::size_t limit = 10) {
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
        if (i) out += ", ";
        out += std::to_string(ids[i]);
    }
    if (ids.size() > limit) out += ", ...";
    return out;
}

// 0 means "take the dimension from the first data row".
std::vector<std::vector<double>> parse_rows(std::istream& in, int dim) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!is_data_line(line)) continue;
        const auto fields = split_fields(line);
        if (dim == 0) dim = static_cast<int>(fields.size());
        if (fields.size() != static_cast<std::size_t>(dim))
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(dim) + " fields, got " +
                                     std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t f = 0; f < fields.size(); ++f) {
            if (!parse_double(fields[f], row[f]))
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": invalid numeric value '" + std::string(fields[f]) +
                                         "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Dataset dataset_from_rows(std::vector<std::vector<double>> rows) {
    if (rows.empty()) throw std::runtime_error("empty base dataset");
    Dataset dataset(static_cast<int>(rows.front().size()));
    for (const auto& row : rows) dataset.add_point(row);
    return dataset;
}

}  // namespace

std::vector<PointId> sorted_ids(const IdSet& ids) {
    std::vector<PointId> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::logic_error("distance: dimension mismatch");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

double distance(const Point& p, const Point& q) { return distance(p.coords, q.coords); }

Dataset::Dataset(int dim) : dim_(dim) {
    if (dim < 1) throw std::logic_error("Dataset: dimension must be positive");
}

bool Dataset::contains(PointId id) const { return index_.find(id) != index_.end(); }

Point Dataset::point(PointId id) const {
    const auto it = index_.find(id);
    if (it == index_.end())
        throw std::logic_error("Dataset: unknown point id " + std::to_string(id));
    return point_at(it->second);
}

Point Dataset::point_at(std::size_t index) const {
    return Point{ids_[index],
                 std::span<const double>(flat_.data() + index * dim_, static_cast<std::size_t>(dim_))};
}

PointId Dataset::add_point(std::span<const double> coords) {
    if (coords.size() != static_cast<std::size_t>(dim_))
        throw std::logic_error("Dataset: coordinate dimension mismatch");
    const PointId id = next_id_++;
    index_.emplace(id, ids_.size());
    ids_.push_back(id);
    flat_.insert(flat_.end(), coords.begin(), coords.end());
    return id;
}

void Dataset::remove_points(const IdSet& doomed) {
    if (doomed.empty()) return;
    std::vector<PointId> missing;
    for (PointId id : doomed)
        if (!contains(id)) missing.push_back(id);
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        throw std::runtime_error("deletion ids not in dataset: " + join_ids(missing));
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (doomed.count(ids_[i])) continue;
        if (out != i) {
            ids_[out] = ids_[i];
            std::copy_n(flat_.begin() + i * dim_, dim_, flat_.begin() + out * dim_);
        }
        ++out;
    }
    ids_.resize(out);
    flat_.resize(out * dim_);
    index_.clear();
    index_.reserve(out);
    for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
}

Dataset Dataset::restore(int dim, std::vector<PointId> ids, std::vector<double> flat_coords,
                         PointId next_id) {
    Dataset dataset(dim);
    if (flat_coords.size() != ids.size() * static_cast<std::size_t>(dim))
        throw std::logic_error("Dataset::restore: coordinate count mismatch");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0 && ids[i] <= ids[i - 1])
            throw std::runtime_error("point ids must be strictly ascending");
        if (ids[i] < 0) throw std::runtime_error("point ids must be non-negative");
    }
    if (!ids.empty() && next_id <= ids.back())
        throw std::runtime_error("next_id must exceed every point id");
    dataset.index_.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) dataset.index_.emplace(ids[i], i);
    dataset.ids_ = std::move(ids);
    dataset.flat_ = std::move(flat_coords);
    dataset.next_id_ = next_id;
    return dataset;
}

bool Dataset::operator==(const Dataset& other) const {
    return dim_ == other.dim_ && next_id_ == other.next_id_ && ids_ == other.ids_ &&
           flat_ == other.flat_;
}

std::vector<PointId> apply_batch_ids(const Dataset& dataset, const UpdateBatch& batch) {
    for (const auto& row : batch.additions) {
        if (row.size() != static_cast<std::size_t>(dataset.dim()))
            throw std::runtime_error("addition row has " + std::to_string(row.size()) +
                                     " fields, dataset dimension is " +
                                     std::to_string(dataset.dim()));
    }
    const PointId first = dataset.next_id();
    const PointId last = first + static_cast<PointId>(batch.additions.size());
    std::vector<PointId> missing;
    bool conflict = false;
    for (PointId id : batch.deletions) {
        if (dataset.contains(id)) continue;
        if (id >= first && id < last)
            conflict = true;
        else
            missing.push_back(id);
    }
    if (conflict) throw std::runtime_error("add-delete conflict in batch");
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        throw std::runtime_error("deletion ids not in dataset: " + join_ids(missing));
    }
    std::vector<PointId> assigned(batch.additions.size());
    for (std::size_t i = 0; i < assigned.size(); ++i)
        assigned[i] = first + static_cast<PointId>(i);
    return assigned;
}

Dataset apply_batch(const Dataset& dataset, const UpdateBatch& batch) {
    apply_batch_ids(dataset, batch);
    Dataset updated = dataset;
    for (const auto& row : batch.additions) updated.add_point(row);
    updated.remove_points(batch.deletions);
    return updated;
}

std::vector<std::vector<double>> load_rows(std::istream& in, int dim) {
    if (dim < 1) throw std::logic_error("load_rows: dimension must be positive");
    return parse_rows(in, dim);
}

std::vector<std::vector<double>> load_rows(std::istream& in) { return parse_rows(in, 0); }

Dataset load_points(std::istream& in, int dim) { return dataset_from_rows(load_rows(in, dim)); }

Dataset load_points(std::istream& in) { return dataset_from_rows(load_rows(in)); }

std::vector<PointId> load_id_list(std::istream& in) {
    std::vector<PointId> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!is_data_line(line)) continue;
        const auto fields = split_fields(line);
        PointId id = 0;
        if (fields.size() != 1 || !parse_id(fields[0], id))
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": expected a single point id");
        ids.push_back(id);
    }
    return ids;
}

}  // namespace snndyn
