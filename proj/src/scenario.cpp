#include "trajcomp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace trajcomp {
namespace {

// splitmix64, used to derive independent per-object streams from one seed.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x1234567887654321ULL) {}

    std::uint64_t next() {
        // xorshift64*; small, portable, reproducible.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dULL;
    }

    std::uint64_t bounded(std::uint64_t n) { return next() % n; }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

double euclid(Location a, Location b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Straight-line leader walk, one 4-connected node step at a time.
class LeaderPath {
public:
    LeaderPath(const SensorGrid& grid, Rng& rng, double movement_range)
        : grid_(grid), rng_(rng), range_(movement_range) {
        pos_ = grid_.location_of(static_cast<Symbol>(rng_.bounded(grid_.node_count())));
        pick_target();
    }

    Location position() const { return pos_; }

    // One 4-connected node step along the fixed line toward the target;
    // never overshoots, so every visited node stays on the grid.
    void step() {
        if (pos_ == target_) pick_target();
        if (2 * err_ > -dy_) {
            err_ -= dy_;
            pos_.x += sx_;
        } else {
            err_ += dx_;
            pos_.y += sy_;
        }
    }

private:
    void pick_target() {
        Symbol best = grid_.symbol_of(pos_);
        double best_gap = -1.0;
        for (int i = 0; i < 64; ++i) {
            const Symbol cand = static_cast<Symbol>(rng_.bounded(grid_.node_count()));
            const Location c = grid_.location_of(cand);
            if (c == pos_) continue;
            const double gap = std::abs(euclid(pos_, c) - range_);
            if (best_gap < 0 || gap < best_gap || (gap == best_gap && cand < best)) {
                best_gap = gap;
                best = cand;
            }
        }
        if (best_gap < 0) best = static_cast<Symbol>((grid_.symbol_of(pos_) + 1) % grid_.node_count());
        target_ = grid_.location_of(best);
        dx_ = std::abs(target_.x - pos_.x);
        dy_ = std::abs(target_.y - pos_.y);
        sx_ = target_.x > pos_.x ? 1 : -1;
        sy_ = target_.y > pos_.y ? 1 : -1;
        err_ = dx_ - dy_;
    }

    const SensorGrid& grid_;
    Rng& rng_;
    double range_;
    Location pos_{};
    Location target_{};
    int dx_ = 0, dy_ = 0, sx_ = 1, sy_ = 1;
    int err_ = 0;
};

// Grid nodes within `radius` hops of `center`, row-major order.
std::vector<Location> hop_ball(const SensorGrid& grid, Location center, int radius) {
    std::vector<Location> ball;
    for (int y = std::max(0, center.y - radius); y <= std::min(grid.height() - 1, center.y + radius); ++y) {
        const int spare = radius - std::abs(y - center.y);
        for (int x = std::max(0, center.x - spare); x <= std::min(grid.width() - 1, center.x + spare); ++x)
            ball.push_back(Location{x, y});
    }
    return ball;
}

} // namespace

std::vector<Symbol> LocationSequence::symbols() const {
    std::vector<Symbol> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(it.symbol);
    return out;
}

void ScenarioConfig::validate() const {
    if (group_size < 1) throw std::domain_error("scenario: group_size must be >= 1");
    if (gdr < 0) throw std::domain_error("scenario: gdr must be >= 0");
    if (batch_period < 1) throw std::domain_error("scenario: batch_period must be >= 1");
    if (error_bound < 0) throw std::domain_error("scenario: error_bound must be >= 0");
    if (tracking_interval <= 0) throw std::domain_error("scenario: tracking_interval must be > 0");
    if (speed < 0) throw std::domain_error("scenario: speed must be >= 0");
    if (movement_range < 0) throw std::domain_error("scenario: movement_range must be >= 0");
}

std::vector<LocationSequence> simulate_group(const ScenarioConfig& config, const SensorGrid& grid) {
    config.validate();
    const double range = config.movement_range > 0
                             ? config.movement_range
                             : 0.5 * std::hypot(grid.width(), grid.height());

    Rng leader_rng(mix64(config.seed));
    LeaderPath leader(grid, leader_rng, range);

    std::vector<Rng> follower_rng;
    for (int j = 1; j < config.group_size; ++j)
        follower_rng.emplace_back(mix64(config.seed ^ mix64(static_cast<std::uint64_t>(j))));

    const int base_radius = static_cast<int>(std::floor(config.gdr));
    const double frac = config.gdr - base_radius;

    std::vector<LocationSequence> seqs(config.group_size);
    for (int j = 0; j < config.group_size; ++j)
        seqs[j].object_id = static_cast<ObjectId>(j);

    double carry = 0.0;
    for (int t = 0; t < config.batch_period; ++t) {
        const Location lp = leader.position();
        seqs[0].items.push_back({static_cast<Timestamp>(t), grid.symbol_of(lp)});
        for (int j = 1; j < config.group_size; ++j) {
            Rng& rng = follower_rng[j - 1];
            // Draw order is fixed (one unit draw + one index draw per
            // interval) so trajectories stay coupled across gdr sweeps.
            const double u = rng.unit();
            const std::uint64_t raw = rng.next();
            const int radius = base_radius + (u < frac ? 1 : 0);
            Location fp = lp;
            if (radius > 0) {
                const auto ball = hop_ball(grid, lp, radius);
                fp = ball[raw % ball.size()];
            }
            seqs[j].items.push_back({static_cast<Timestamp>(t), grid.symbol_of(fp)});
        }
        carry += config.speed * config.tracking_interval;
        while (carry >= 1.0) {
            leader.step();
            carry -= 1.0;
        }
    }
    return seqs;
}

void write_trajectories_csv(std::ostream& out, const std::vector<LocationSequence>& seqs,
                            const SensorGrid& grid) {
    out << "t,object_id,x,y\n";
    std::size_t longest = 0;
    for (const auto& s : seqs) longest = std::max(longest, s.items.size());
    for (std::size_t i = 0; i < longest; ++i) {
        for (const auto& s : seqs) {
            if (i >= s.items.size()) continue;
            const Location p = grid.location_of(s.items[i].symbol);
            out << s.items[i].t << ',' << s.object_id << ',' << p.x << ',' << p.y << '\n';
        }
    }
}

std::vector<LocationSequence> read_trajectories_csv(std::istream& in, const SensorGrid& grid) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trajectory csv: empty input");
    if (line != "t,object_id,x,y")
        throw std::runtime_error("trajectory csv: bad header '" + line + "'");

    std::map<ObjectId, LocationSequence> by_object;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        long long t, id, x, y;
        char c1, c2, c3;
        if (!(row >> t >> c1 >> id >> c2 >> x >> c3 >> y) || c1 != ',' || c2 != ',' || c3 != ',')
            throw std::runtime_error("trajectory csv: parse error at line " + std::to_string(lineno));
        auto& seq = by_object[static_cast<ObjectId>(id)];
        seq.object_id = static_cast<ObjectId>(id);
        seq.items.push_back({static_cast<Timestamp>(t),
                             grid.symbol_of(Location{static_cast<int>(x), static_cast<int>(y)})});
    }

    std::vector<LocationSequence> seqs;
    for (auto& [id, seq] : by_object) {
        std::sort(seq.items.begin(), seq.items.end(),
                  [](const SequenceItem& a, const SequenceItem& b) { return a.t < b.t; });
        for (std::size_t i = 1; i < seq.items.size(); ++i)
            if (seq.items[i].t <= seq.items[i - 1].t)
                throw std::runtime_error("trajectory csv: duplicate timestamp for object " +
                                         std::to_string(id));
        seqs.push_back(std::move(seq));
    }
    return seqs;
}

ScenarioFile parse_scenario_file(std::istream& in) {
    ScenarioFile file;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key=value at line " + std::to_string(lineno));
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "n" || key == "group_size") file.config.group_size = std::stoi(value);
            else if (key == "gdr") file.config.gdr = std::stod(value);
            else if (key == "D" || key == "batch_period") file.config.batch_period = std::stoi(value);
            else if (key == "eps" || key == "error_bound") file.config.error_bound = std::stoi(value);
            else if (key == "tracking_interval") file.config.tracking_interval = std::stod(value);
            else if (key == "speed") file.config.speed = std::stod(value);
            else if (key == "movement_range") file.config.movement_range = std::stod(value);
            else if (key == "seed") file.config.seed = std::stoull(value);
            else if (key == "width") file.grid_width = std::stoi(value);
            else if (key == "height") file.grid_height = std::stoi(value);
            else if (key == "cluster_grid") file.cluster_grid = std::stoi(value);
            else throw std::runtime_error("config: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config: bad value for '" + key + "' at line " +
                                     std::to_string(lineno));
        }
    }
    file.config.validate();
    return file;
}

} // namespace trajcomp
