#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace rotbl {

/// Tensor grid: periodic tangential direction on [-L, L), wall-normal nodes on [0, Y].
struct Grid {
    int n_x1 = 0;
    int n_y = 0;
    double L = 0.0;
    double Y = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    std::vector<double> x1_nodes;
    std::vector<double> y_nodes;

    std::size_t size() const { return static_cast<std::size_t>(n_x1) * n_y; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_y + j; }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws std::invalid_argument unless n_x1 is a power of two >= 8, n_y >= 5 and L, Y > 0.
GridPtr make_grid(int n_x1, int n_y, double L, double Y);

bool same_grid(const Grid& a, const Grid& b);

/// Samples indexed (i_x1, i_y), stored x1-major.
///
/// `ramp` is an optional per-row slope s(y): the field is understood as a periodic part
/// plus s(y) * (x1 + L). It is produced by tangential integration of data with nonzero mean.
struct Field2D {
    GridPtr grid;
    std::vector<double> values;
    std::string label;
    std::vector<double> ramp;

    Field2D() = default;
    Field2D(GridPtr g, std::string name = {});

    double& operator()(int i, int j) { return values[grid->index(i, j)]; }
    double operator()(int i, int j) const { return values[grid->index(i, j)]; }

    bool has_ramp() const { return !ramp.empty(); }
    double max_abs() const;
    bool all_finite() const;
};

/// A function of x1 only: the restriction of some field to the wall.
struct TraceField {
    GridPtr grid;
    std::vector<double> values;
    std::string label;

    TraceField() = default;
    TraceField(GridPtr g, std::string name = {});

    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
    double max_abs() const;
};

struct WeightParams {
    double ell = 1.0;
    double a = 0.5;
};

/// Throws std::invalid_argument when ell is outside (1/2, 1], a <= 0, or a*Y^2 > 600.
void validate_weight(const WeightParams& w, double Y);

/// Non-fatal diagnostics collected during a run.
struct WarningLog {
    std::vector<std::string> messages;
    void add(std::string msg) { messages.push_back(std::move(msg)); }
    bool empty() const { return messages.empty(); }
};

Field2D operator+(const Field2D& a, const Field2D& b);
Field2D operator-(const Field2D& a, const Field2D& b);
Field2D operator*(double c, const Field2D& f);
/// Pointwise product; the result carries no ramp.
Field2D hadamard(const Field2D& a, const Field2D& b);

/// f(x1) broadcast over every y.
Field2D broadcast(const TraceField& t);
/// y * t(x1).
Field2D y_times(const TraceField& t);
/// Same broadcasts onto another grid sharing the tangential discretisation.
Field2D broadcast(const TraceField& t, const GridPtr& g);
Field2D y_times(const TraceField& t, const GridPtr& g);
TraceField row(const Field2D& f, int j);
/// Rebinds a trace to a grid with identical n_x1 and L; throws otherwise.
TraceField retarget(const TraceField& t, const GridPtr& g);
TraceField operator+(const TraceField& a, const TraceField& b);
TraceField operator-(const TraceField& a, const TraceField& b);
TraceField operator*(double c, const TraceField& t);

}  // namespace rotbl
