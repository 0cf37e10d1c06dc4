#include "sara/geometry.hpp"

#include "sara/random.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sara {

void Region::validate() const
{
    if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height))
        throw std::invalid_argument("region: width and height must be positive and finite");
}

bool Region::contains(Point p) const
{
    return p.x >= 0.0 && p.x < width && p.y >= 0.0 && p.y < height;
}

double Region::distance(Point a, Point b) const
{
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    if (wrap) {
        dx = std::min(dx, width - dx);
        dy = std::min(dy, height - dy);
    }
    return std::hypot(dx, dy);
}

Point Region::wrap_point(Point p) const
{
    if (!wrap)
        return p;
    auto fold = [](double v, double len) {
        double r = std::fmod(v, len);
        if (r < 0.0)
            r += len;
        // fmod of a tiny negative value can round up to len itself.
        return r >= len ? 0.0 : r;
    };
    return {fold(p.x, width), fold(p.y, height)};
}

double pair_distance(const Topology& t, Point a, Point b)
{
    return t.region.distance(a, b);
}

namespace {

void check_placement_args(const Region& region, double link_distance)
{
    region.validate();
    if (!(link_distance > 0.0))
        throw std::invalid_argument("link_distance must be > 0");
    if (!(link_distance < std::min(region.width, region.height) / 2.0))
        throw std::invalid_argument("link_distance must be below min(width, height)/2");
}

Topology place_pairs(std::size_t pairs, const Region& region, double link_distance, Rng& rng)
{
    Topology t;
    t.region = region;
    t.link_distance = link_distance;
    t.tx.reserve(pairs);
    t.rx.reserve(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        Point tx{uniform01(rng) * region.width, uniform01(rng) * region.height};
        double angle = uniform01(rng) * 2.0 * std::numbers::pi;
        Point rx{tx.x + link_distance * std::cos(angle), tx.y + link_distance * std::sin(angle)};
        t.tx.push_back(tx);
        t.rx.push_back(region.wrap_point(rx));
    }
    return t;
}

} // namespace

Topology generate_topology(double density, const Region& region, double link_distance,
                           std::uint64_t seed)
{
    if (!(density > 0.0) || !std::isfinite(density))
        throw std::invalid_argument("density must be > 0");
    check_placement_args(region, link_distance);

    Rng rng(derive_seed(seed, Stream::topology));
    std::poisson_distribution<std::size_t> count(density * region.area());
    std::size_t n = count(rng);
    return place_pairs(n, region, link_distance, rng);
}

Topology generate_topology_with_count(std::size_t pairs, const Region& region,
                                      double link_distance, std::uint64_t seed)
{
    check_placement_args(region, link_distance);
    Rng rng(derive_seed(seed, Stream::topology));
    return place_pairs(pairs, region, link_distance, rng);
}

Topology topology_from_points(std::vector<Point> tx, std::vector<Point> rx, const Region& region,
                              double tolerance)
{
    region.validate();
    if (tx.size() != rx.size())
        throw std::invalid_argument("topology: transmitter and receiver counts differ");

    Topology t;
    t.region = region;
    if (tx.empty())
        return t;

    for (const Point& p : tx)
        if (!region.contains(p))
            throw std::invalid_argument("topology: transmitter outside region");

    t.link_distance = region.distance(tx[0], rx[0]);
    if (!(t.link_distance > 0.0))
        throw std::invalid_argument("topology: zero link distance");
    for (std::size_t i = 1; i < tx.size(); ++i) {
        double d = region.distance(tx[i], rx[i]);
        if (std::abs(d - t.link_distance) > tolerance * t.link_distance)
            throw std::invalid_argument("topology: pair " + std::to_string(i) +
                                        " link distance differs from pair 0");
    }
    t.tx = std::move(tx);
    t.rx = std::move(rx);
    return t;
}

void write_topology(std::ostream& os, const Topology& t)
{
    os << "# sara-topology v1\n";
    os << std::setprecision(17) << "# width=" << t.region.width << " height=" << t.region.height
       << " wrap=" << (t.region.wrap ? 1 : 0) << " link_distance=" << t.link_distance << '\n';
    os << "index,tx_x,tx_y,rx_x,rx_y\n";
    os << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < t.size(); ++i)
        os << i << ',' << t.tx[i].x << ',' << t.tx[i].y << ',' << t.rx[i].x << ',' << t.rx[i].y
           << '\n';
    os << std::defaultfloat;
}

Topology read_topology(std::istream& is)
{
    Region region;
    double link_distance = -1.0;
    std::vector<Point> tx, rx;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::istringstream fields(line.substr(1));
            std::string kv;
            while (fields >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    continue;
                std::string key = kv.substr(0, eq);
                double value = std::stod(kv.substr(eq + 1));
                if (key == "width")
                    region.width = value;
                else if (key == "height")
                    region.height = value;
                else if (key == "wrap")
                    region.wrap = value != 0.0;
                else if (key == "link_distance")
                    link_distance = value;
            }
            continue;
        }
        if (line.rfind("index", 0) == 0)
            continue;

        std::istringstream row(line);
        std::string cell;
        double v[5];
        for (int k = 0; k < 5; ++k) {
            if (!std::getline(row, cell, ','))
                throw std::invalid_argument("topology file line " + std::to_string(line_no) +
                                            ": expected 5 fields");
            v[k] = std::stod(cell);
        }
        if (static_cast<std::size_t>(v[0]) != tx.size())
            throw std::invalid_argument("topology file line " + std::to_string(line_no) +
                                        ": indices must be consecutive from 0");
        tx.push_back({v[1], v[2]});
        rx.push_back({v[3], v[4]});
    }

    Topology t = topology_from_points(std::move(tx), std::move(rx), region);
    if (link_distance > 0.0)
        t.link_distance = link_distance;
    return t;
}

void save_topology(const std::string& path, const Topology& t)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open " + path + " for writing");
    write_topology(os, t);
}

Topology load_topology(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open " + path);
    return read_topology(is);
}

} // namespace sara
