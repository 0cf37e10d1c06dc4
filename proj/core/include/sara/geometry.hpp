#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sara {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Rectangular simulation window [0, width) x [0, height).
///
/// With `wrap` set, distances use the minimum-image convention on the
/// torus obtained by identifying opposite edges.
struct Region {
    double width = 100.0;
    double height = 100.0;
    bool wrap = false;

    /// Throws std::invalid_argument unless width > 0 and height > 0.
    void validate() const;
    double area() const { return width * height; }
    bool contains(Point p) const;
    double distance(Point a, Point b) const;
    /// Maps a point back into the window (torus only; identity otherwise).
    Point wrap_point(Point p) const;

    friend bool operator==(const Region&, const Region&) = default;
};

/// Transmitter/receiver pairs. Receiver i is associated with transmitter i.
struct Topology {
    std::vector<Point> tx;
    std::vector<Point> rx;
    double link_distance = 5.0;
    Region region;

    std::size_t size() const { return tx.size(); }
    bool empty() const { return tx.empty(); }

    friend bool operator==(const Topology&, const Topology&) = default;
};

double pair_distance(const Topology& t, Point a, Point b);

/// Homogeneous PPP of transmitters with intensity `density` (per m^2) in
/// `region`; each receiver sits at `link_distance` in a uniform direction.
/// Receivers outside a non-wrapping region are kept.
Topology generate_topology(double density, const Region& region, double link_distance,
                           std::uint64_t seed);

/// Same placement law conditioned on exactly `pairs` transmitters.
Topology generate_topology_with_count(std::size_t pairs, const Region& region,
                                      double link_distance, std::uint64_t seed);

/// Builds a topology from explicit coordinates. The link distance is taken
/// from the first pair and every other pair must match it within
/// `tolerance` (relative).
Topology topology_from_points(std::vector<Point> tx, std::vector<Point> rx, const Region& region,
                              double tolerance = 1e-5);

/// Text format:
///   # sara-topology v1
///   # width=<m> height=<m> wrap=<0|1> link_distance=<m>
///   index,tx_x,tx_y,rx_x,rx_y
///   0,12.000000,...
/// Coordinates are written with 6 decimal places.
void write_topology(std::ostream& os, const Topology& t);
Topology read_topology(std::istream& is);

void save_topology(const std::string& path, const Topology& t);
Topology load_topology(const std::string& path);

} // namespace sara
