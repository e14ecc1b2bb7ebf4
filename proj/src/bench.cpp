#include "trajcomp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>

namespace trajcomp {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<LocationSequence> slice_half(const std::vector<LocationSequence>& seqs, int D,
                                         bool second) {
    std::vector<LocationSequence> out;
    out.reserve(seqs.size());
    for (const auto& seq : seqs) {
        LocationSequence s;
        s.object_id = seq.object_id;
        for (const auto& item : seq.items) {
            const bool in_half = second ? item.t >= static_cast<Timestamp>(D)
                                        : item.t < static_cast<Timestamp>(D);
            if (!in_half) continue;
            const Timestamp t = second ? item.t - static_cast<Timestamp>(D) : item.t;
            s.items.push_back({t, item.symbol});
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

SingleRun run_scenario_once(const ScenarioConfig& config, const SensorGrid& grid,
                            const PstParams& pst, const PacketConfig& packet) {
    // Warm-up half trains the shared model; the second half is the batch
    // under evaluation.
    ScenarioConfig doubled = config;
    doubled.batch_period = config.batch_period * 2;
    const auto full = simulate_group(doubled, grid);
    const auto training = slice_half(full, config.batch_period, false);
    const auto evaluation = slice_half(full, config.batch_period, true);

    const GroupModel model = learn_group_model(0, training, grid, pst);

    CompressOptions opts;
    opts.error_bound = config.error_bound;
    opts.packet = packet;

    SingleRun run;
    const CompressedBatch batch = compress_batch(evaluation, grid, model, opts);
    run.batch_bytes = static_cast<double>(batch.packet_bytes());
    run.batch_table_bytes = static_cast<double>(batch.packet_bytes_with_tables());

    CompressOptions plain = opts;
    plain.apply_replace = false;
    run.huffman_only_bytes =
        static_cast<double>(compress_batch(evaluation, grid, model, plain).packet_bytes());

    const OnlineVolume online = online_volume(evaluation, nullptr, false, packet);
    const OnlineVolume online_pred = online_volume(evaluation, &model.tree, true, packet);
    run.online_bytes = static_cast<double>(online.bytes);
    run.online_pred_bytes = static_cast<double>(online_pred.bytes);
    run.raw_bytes = static_cast<double>(online.bytes);
    run.hit_rate = online_pred.hit_rate();
    return run;
}

std::vector<MetricRow> run_experiment(const ExperimentSpec& spec) {
    if (spec.repetitions < 1) throw std::domain_error("experiment: repetitions must be >= 1");
    const SensorGrid grid(spec.grid_width, spec.grid_height, spec.cluster_grid);

    std::vector<MetricRow> rows;
    for (int D : spec.batch_periods)
        for (int n : spec.group_sizes)
            for (double gdr : spec.gdrs)
                for (int eps : spec.error_bounds) {
                    MetricRow row;
                    row.scenario = spec.scenario_name;
                    row.gdr = gdr;
                    row.n = n;
                    row.D = D;
                    row.eps = eps;
                    row.repetitions = spec.repetitions;

                    std::vector<double> batch_samples;
                    for (int rep = 0; rep < spec.repetitions; ++rep) {
                        ScenarioConfig config;
                        config.group_size = n;
                        config.gdr = gdr;
                        config.batch_period = D;
                        config.error_bound = eps;
                        config.seed = spec.seed_base + static_cast<std::uint64_t>(rep);
                        const SingleRun run =
                            run_scenario_once(config, grid, spec.pst, spec.packet);
                        row.raw_bytes += run.raw_bytes;
                        row.batch_bytes += run.batch_bytes;
                        row.batch_table_bytes += run.batch_table_bytes;
                        row.huffman_only_bytes += run.huffman_only_bytes;
                        row.online_bytes += run.online_bytes;
                        row.online_pred_bytes += run.online_pred_bytes;
                        row.hit_rate += run.hit_rate;
                        batch_samples.push_back(run.batch_bytes);
                    }
                    const double reps = spec.repetitions;
                    row.raw_bytes /= reps;
                    row.batch_bytes /= reps;
                    row.batch_table_bytes /= reps;
                    row.huffman_only_bytes /= reps;
                    row.online_bytes /= reps;
                    row.online_pred_bytes /= reps;
                    row.hit_rate /= reps;
                    double var = 0;
                    for (double b : batch_samples) var += (b - row.batch_bytes) * (b - row.batch_bytes);
                    row.batch_bytes_stddev = std::sqrt(var / reps);
                    row.ratio = compression_ratio(row.raw_bytes, row.batch_bytes);
                    row.ratio_huffman_only =
                        compression_ratio(row.raw_bytes, row.huffman_only_bytes);
                    row.ratio_online_pred =
                        compression_ratio(row.raw_bytes, row.online_pred_bytes);
                    rows.push_back(std::move(row));
                }
    return rows;
}

namespace {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Minimal deterministic SVG line plot.
void write_svg_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, std::vector<Series> series) {
    const int width = 640, height = 440;
    const int ml = 70, mr = 150, mt = 40, mb = 50;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& s : series) {
        std::sort(s.points.begin(), s.points.end());
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmin > xmax) {
        xmin = ymin = 0;
        xmax = ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    ymin = std::min(ymin, 0.0);

    auto sx = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    auto sy = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << width / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    // axes
    out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
        << height - mb << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
        << "' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = xmin + (xmax - xmin) * i / 4;
        const double y = ymin + (ymax - ymin) * i / 4;
        out << "<text x='" << fmt(sx(x)) << "' y='" << height - mb + 18
            << "' text-anchor='middle' font-size='11'>" << fmt(x) << "</text>\n";
        out << "<text x='" << ml - 8 << "' y='" << fmt(sy(y) + 4)
            << "' text-anchor='end' font-size='11'>" << fmt(y) << "</text>\n";
    }
    out << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 12
        << "' text-anchor='middle' font-size='12'>" << xlabel << "</text>\n";
    out << "<text x='16' y='" << (mt + height - mb) / 2
        << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
        << (mt + height - mb) / 2 << ")'>" << ylabel << "</text>\n";

    std::size_t color = 0;
    for (const auto& s : series) {
        const char* c = palette[color % (sizeof palette / sizeof palette[0])];
        out << "<polyline fill='none' stroke='" << c << "' stroke-width='1.5' points='";
        for (const auto& [x, y] : s.points) out << fmt(sx(x)) << "," << fmt(sy(y)) << " ";
        out << "'/>\n";
        for (const auto& [x, y] : s.points)
            out << "<circle cx='" << fmt(sx(x)) << "' cy='" << fmt(sy(y)) << "' r='2.5' fill='"
                << c << "'/>\n";
        out << "<text x='" << width - mr + 10 << "' y='" << mt + 16 + 16 * color
            << "' font-size='11' fill='" << c << "'>" << s.label << "</text>\n";
        ++color;
    }
    out << "</svg>\n";
}

std::string series_key(const MetricRow& r, bool with_gdr, bool with_n, bool with_D) {
    std::string key;
    if (with_gdr) key += "gdr=" + fmt(r.gdr) + " ";
    if (with_n) key += "n=" + std::to_string(r.n) + " ";
    if (with_D) key += "D=" + std::to_string(r.D) + " ";
    if (!key.empty()) key.pop_back();
    return key;
}

} // namespace

std::vector<std::string> emit_report(const std::vector<MetricRow>& rows,
                                     const std::string& out_dir, ReportFormat format) {
    if (rows.empty()) throw std::domain_error("report: no rows");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    {
        const std::string path = out_dir + "/metrics.csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("report: cannot write " + path);
        out << "scenario,gdr,n,D,eps,raw_bytes,batch_bytes,online_bytes,online_pred_bytes,ratio\n";
        for (const auto& r : rows)
            out << r.scenario << ',' << fmt(r.gdr) << ',' << r.n << ',' << r.D << ',' << r.eps
                << ',' << fmt(r.raw_bytes) << ',' << fmt(r.batch_bytes) << ','
                << fmt(r.online_bytes) << ',' << fmt(r.online_pred_bytes) << ',' << fmt(r.ratio)
                << '\n';
        written.push_back(path);
    }
    {
        const std::string path = out_dir + "/bench_detail.csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("report: cannot write " + path);
        out << "scenario,gdr,n,D,eps,raw_bytes,batch_bytes,batch_table_bytes,huffman_only_bytes,"
               "online_bytes,online_pred_bytes,ratio,ratio_huffman_only,ratio_online_pred,"
               "hit_rate,batch_bytes_stddev,repetitions\n";
        for (const auto& r : rows)
            out << r.scenario << ',' << fmt(r.gdr) << ',' << r.n << ',' << r.D << ',' << r.eps
                << ',' << fmt(r.raw_bytes) << ',' << fmt(r.batch_bytes) << ','
                << fmt(r.batch_table_bytes) << ',' << fmt(r.huffman_only_bytes) << ','
                << fmt(r.online_bytes) << ',' << fmt(r.online_pred_bytes) << ',' << fmt(r.ratio)
                << ',' << fmt(r.ratio_huffman_only) << ',' << fmt(r.ratio_online_pred) << ','
                << fmt(r.hit_rate) << ',' << fmt(r.batch_bytes_stddev) << ',' << r.repetitions
                << '\n';
        written.push_back(path);
    }
    if (format == ReportFormat::Csv) return written;

    auto collect = [&](auto&& xy, bool g, bool n, bool d) {
        std::map<std::string, Series> by_key;
        for (const auto& r : rows) {
            const auto point = xy(r);
            if (!point) continue;
            const std::string key = series_key(r, g, n, d);
            by_key[key].label = key;
            by_key[key].points.push_back(*point);
        }
        std::vector<Series> out;
        for (auto& [k, s] : by_key) out.push_back(std::move(s));
        return out;
    };
    using Point = std::optional<std::pair<double, double>>;

    struct Plot {
        std::string file, title, xlabel, ylabel;
        std::vector<Series> series;
    };
    std::vector<Plot> plots;
    plots.push_back({"ratio_vs_gdr.svg", "Compression ratio vs dispersion radius", "gdr", "ratio",
                     collect([](const MetricRow& r) -> Point {
                         return std::make_pair(r.gdr, r.ratio);
                     }, false, true, true)});
    plots.push_back({"bytes_per_object_vs_n.svg", "Batch bytes per object vs group size", "n",
                     "bytes/object",
                     collect([](const MetricRow& r) -> Point {
                         return std::make_pair(double(r.n), r.batch_bytes / r.n);
                     }, true, false, true)});
    plots.push_back({"bytes_vs_D.svg", "Batch bytes per interval vs batch period", "D",
                     "bytes/interval",
                     collect([](const MetricRow& r) -> Point {
                         return std::make_pair(double(r.D), r.batch_bytes / r.D);
                     }, true, true, false)});
    plots.push_back({"ratio_vs_eps.svg", "Compression ratio vs error bound", "eps", "ratio",
                     collect([](const MetricRow& r) -> Point {
                         return std::make_pair(double(r.eps), r.ratio);
                     }, true, true, false)});
    {
        Series replace_series{"merge+replace+huffman", {}};
        Series huffman_series{"merge+huffman", {}};
        for (const auto& r : rows) {
            replace_series.points.emplace_back(r.hit_rate, r.ratio);
            huffman_series.points.emplace_back(r.hit_rate, r.ratio_huffman_only);
        }
        plots.push_back({"ratio_vs_hit_rate.svg", "Compression ratio vs prediction hit rate",
                         "hit rate", "ratio", {replace_series, huffman_series}});
    }
    for (const auto& p : plots) {
        const std::string path = out_dir + "/" + p.file;
        write_svg_plot(path, p.title, p.xlabel, p.ylabel, p.series);
        written.push_back(path);
    }
    return written;
}

} // namespace trajcomp
