#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace snndyn {

using PointId = std::int64_t;
using IdSet = std::unordered_set<PointId>;

// Ascending copy of an id set, for deterministic iteration.
std::vector<PointId> sorted_ids(const IdSet& ids);

// A borrowed view of one dataset point.
struct Point {
    PointId id = -1;
    std::span<const double> coords;
};

// Euclidean (L2) distance. Throws std::logic_error on dimension mismatch.
double distance(std::span<const double> a, std::span<const double> b);
double distance(const Point& p, const Point& q);

// Point storage with stable, strictly increasing ids. Deleted ids are never
// reissued, so rankings ordered by (distance, id) stay deterministic across
// the lifetime of a session. Single writer; concurrent reads are safe while
// no mutation is in flight.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(int dim);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }
    PointId next_id() const noexcept { return next_id_; }

    bool contains(PointId id) const;
    Point point(PointId id) const;  // throws std::logic_error if absent
    Point point_at(std::size_t index) const;
    const std::vector<PointId>& ids() const noexcept { return ids_; }  // ascending

    // Appends a point, assigning and returning the next fresh id.
    PointId add_point(std::span<const double> coords);

    // Removes a set of points; every id must exist. Order of survivors is
    // preserved.
    void remove_points(const IdSet& doomed);

    // Rebuilds a dataset from serialized rows. ids must be strictly
    // ascending and next_id must exceed every id.
    static Dataset restore(int dim, std::vector<PointId> ids,
                           std::vector<double> flat_coords, PointId next_id);

    bool operator==(const Dataset& other) const;

private:
    int dim_ = 0;
    std::vector<PointId> ids_;
    std::vector<double> flat_;  // size() * dim_ coordinates, row-major
    std::unordered_map<PointId, std::size_t> index_;
    PointId next_id_ = 0;
};

// One batch of pending changes: raw coordinate rows to insert and existing
// ids to delete. Deletions may not reference the batch's own additions.
struct UpdateBatch {
    std::vector<std::vector<double>> additions;
    IdSet deletions;

    bool empty() const { return additions.empty() && deletions.empty(); }
};

// Validates the batch against the dataset and returns the ids its additions
// will receive (next_id, next_id+1, ...). Does not mutate the dataset; the
// incremental phases perform the membership changes themselves.
std::vector<PointId> apply_batch_ids(const Dataset& dataset, const UpdateBatch& batch);

// Copy of the dataset with the batch applied: additions appended with fresh
// ids, deletions removed. This is the input the from-scratch pipeline sees.
Dataset apply_batch(const Dataset& dataset, const UpdateBatch& batch);

// Parses numeric rows: one point per line, fields split on commas or runs of
// whitespace, '#' comments and blank lines ignored. Errors carry 1-based
// line numbers. May return zero rows.
std::vector<std::vector<double>> load_rows(std::istream& in, int dim);

// Like load_rows with the dimension taken from the first data row.
std::vector<std::vector<double>> load_rows(std::istream& in);

// Materializes a Dataset with ids 0..n-1 in row order; rejects empty input.
Dataset load_points(std::istream& in, int dim);
Dataset load_points(std::istream& in);

// Parses one point id per line ('#' comments and blanks ignored).
std::vector<PointId> load_id_list(std::istream& in);

}  // namespace snndyn
