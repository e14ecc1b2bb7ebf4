// Command line front end: simulate group trajectories, mine movement
// patterns, compress/decompress batches, encrypt/decrypt containers, and
// run the benchmark sweeps.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "trajcomp/bench.hpp"
#include "trajcomp/blowfish.hpp"
#include "trajcomp/ensemble.hpp"
#include "trajcomp/pipeline.hpp"
#include "trajcomp/similarity.hpp"

using namespace trajcomp;

namespace {

struct ScenarioFlags {
    std::string config_path;
    ScenarioFile file;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "key=value scenario file; overrides the flags below");
        cmd->add_option("-n,--group-size", file.config.group_size, "objects in the group");
        cmd->add_option("--gdr", file.config.gdr, "group dispersion radius (hops)");
        cmd->add_option("-D,--batch-period", file.config.batch_period, "tracking intervals");
        cmd->add_option("--eps", file.config.error_bound, "error bound (hops)");
        cmd->add_option("--tracking-interval", file.config.tracking_interval, "time units");
        cmd->add_option("--speed", file.config.speed, "nodes per time unit");
        cmd->add_option("--movement-range", file.config.movement_range,
                        "leader leg length; 0 = half the grid diagonal");
        cmd->add_option("--seed", file.config.seed, "random seed");
        cmd->add_option("--width", file.grid_width, "grid width (nodes)");
        cmd->add_option("--height", file.grid_height, "grid height (nodes)");
        cmd->add_option("--cluster-grid", file.cluster_grid, "clusters per side");
    }

    ScenarioFile resolve() const {
        if (config_path.empty()) {
            file.config.validate();
            return file;
        }
        std::ifstream in(config_path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
        return parse_scenario_file(in);
    }
};

struct GridFlags {
    int width = 16;
    int height = 16;
    int cluster_grid = 4;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--width", width, "grid width (nodes)");
        cmd->add_option("--height", height, "grid height (nodes)");
        cmd->add_option("--cluster-grid", cluster_grid, "clusters per side");
    }

    SensorGrid grid() const { return SensorGrid(width, height, cluster_grid); }
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> resolve_key(const std::string& key_hex) {
    std::string hex = key_hex;
    if (hex.empty()) {
        const char* env = std::getenv("TRAJCOMP_KEY");
        if (env) hex = env;
    }
    if (hex.empty())
        throw std::runtime_error("no key: pass --key-hex or set TRAJCOMP_KEY");
    return parse_hex_key(hex);
}

int cmd_simulate(const ScenarioFlags& flags, const std::string& output) {
    const ScenarioFile file = flags.resolve();
    const SensorGrid grid = file.grid();
    const auto seqs = simulate_group(file.config, grid);
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    write_trajectories_csv(out, seqs, grid);
    std::cout << "wrote " << output << " (" << seqs.size() << " objects, "
              << file.config.batch_period << " intervals)\n";
    return 0;
}

int cmd_mine(const std::string& input, const std::string& out_dir, int regions,
             double sim_theta, int partition_param, const GridFlags& flags) {
    const SensorGrid grid = flags.grid();
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open " + input);
    const auto seqs = read_trajectories_csv(in, grid);
    if (seqs.empty()) throw std::runtime_error("no trajectories in " + input);

    const std::size_t len = seqs.front().items.size();
    std::vector<GroupingResult> locals;
    for (int r = 0; r < regions; ++r) {
        const std::size_t lo = len * r / regions;
        const std::size_t hi = len * (r + 1) / regions;
        if (hi <= lo) continue;
        std::map<ObjectId, PatternTree> trees;
        for (const auto& seq : seqs) {
            std::vector<Symbol> window;
            for (std::size_t i = lo; i < std::min(hi, seq.items.size()); ++i)
                window.push_back(seq.items[i].symbol);
            if (window.empty()) continue;
            trees.emplace(seq.object_id,
                          PatternTree::learn(window, grid.node_count(), PstParams{}));
        }
        auto local = hcs_cluster(build_similarity_graph(trees, sim_theta));
        local.source = r;
        locals.push_back(std::move(local));
    }
    const GroupingResult result = ce_ensemble(locals, partition_param);

    std::filesystem::create_directories(out_dir);
    std::map<ObjectId, const LocationSequence*> by_id;
    for (const auto& s : seqs) by_id[s.object_id] = &s;

    int written = 0;
    const auto groups = result.groups();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::cout << "group " << g << ":";
        for (ObjectId m : groups[g]) std::cout << " " << m;
        std::cout << "\n";
        if (groups[g].size() < 2) continue;
        std::vector<LocationSequence> members;
        for (ObjectId m : groups[g]) members.push_back(*by_id.at(m));
        const GroupModel model =
            learn_group_model(static_cast<std::uint32_t>(g), members, grid, PstParams{});
        const std::string path = out_dir + "/group_" + std::to_string(g) + ".model";
        std::ofstream out(path);
        model.serialize(out);
        std::cout << "  model " << path << " digest " << std::hex << model.digest()
                  << std::dec << "\n";
        ++written;
    }
    std::cout << groups.size() << " groups, " << written << " models written\n";
    return 0;
}

GroupModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model " + path);
    return GroupModel::parse(in);
}

int cmd_compress(const std::string& input, const std::string& model_path,
                 const std::string& output, int eps, bool huffman_only,
                 const GridFlags& flags) {
    const SensorGrid grid = flags.grid();
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open " + input);
    const auto seqs = read_trajectories_csv(in, grid);
    const GroupModel model = load_model(model_path);

    CompressOptions opts;
    opts.error_bound = eps;
    opts.apply_replace = !huffman_only;
    const CompressedBatch batch = compress_batch(seqs, grid, model, opts);

    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    write_batch_container(out, batch, opts, grid, model);

    std::uint64_t items = 0;
    for (const auto& s : seqs) items += s.items.size();
    const double raw = static_cast<double>(items) * 7.0;
    std::cout << "packets " << batch.packets.size() << ", bytes " << batch.packet_bytes()
              << " (with tables " << batch.packet_bytes_with_tables() << ")\n";
    std::cout << "entropy " << batch.entropy_before << " -> " << batch.entropy_after
              << ", replaced " << batch.replaced_count << "/" << batch.predictable_count
              << " predictable items\n";
    std::cout << "ratio vs per-update accounting: "
              << compression_ratio(raw, static_cast<double>(batch.packet_bytes())) << "\n";
    return 0;
}

int cmd_decompress(const std::string& input, const std::string& model_path,
                   const std::string& output) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open " + input);
    const BatchContainer container = read_batch_container(in);
    const GroupModel model = load_model(model_path);
    if (model.digest() != container.batch.model_digest)
        throw std::runtime_error("model digest mismatch: compressor used a different model");
    const SensorGrid grid = container.grid();
    const auto seqs = unpack_batch(container.batch.packets, grid, model, container.opts);
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    write_trajectories_csv(out, seqs, grid);
    std::cout << "wrote " << output << " (" << seqs.size() << " objects)\n";
    return 0;
}

int cmd_encrypt(const std::string& input, const std::string& output,
                const std::string& key_hex, bool decrypt) {
    const Blowfish bf(resolve_key(key_hex));
    const auto data = read_file(input);
    const auto out = decrypt ? bf.decrypt_bytes(data) : bf.encrypt_bytes(data);
    write_file(output, out);
    std::cout << (decrypt ? "decrypted " : "encrypted ") << input << " -> " << output << " ("
              << out.size() << " bytes)\n";
    return 0;
}

int cmd_bench(const ExperimentSpec& spec, const std::string& out_dir, bool plots) {
    const auto rows = run_experiment(spec);
    const auto files =
        emit_report(rows, out_dir, plots ? ReportFormat::CsvAndPlots : ReportFormat::Csv);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"group movement trajectory compression toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "generate group trajectories (RPGM)");
    ScenarioFlags sim_flags;
    sim_flags.add_to(simulate);
    std::string sim_output = "trajectories.csv";
    simulate->add_option("-o,--output", sim_output, "output CSV");

    // mine
    auto* mine = app.add_subcommand("mine", "discover groups and learn their models");
    GridFlags mine_flags;
    std::string mine_input, mine_out_dir = "mined";
    int mine_regions = 3;
    double mine_theta = 0.3;
    int mine_partition = 4;
    mine->add_option("-i,--input", mine_input, "trajectory CSV")->required();
    mine->add_option("-o,--out-dir", mine_out_dir, "directory for group models");
    mine->add_option("--regions", mine_regions, "local grouping regions (time slices)");
    mine->add_option("--sim-theta", mine_theta, "similarity threshold");
    mine->add_option("--partition-param", mine_partition, "consensus threshold levels");
    mine_flags.add_to(mine);

    // compress
    auto* compress = app.add_subcommand("compress", "compress one batch of trajectories");
    GridFlags comp_flags;
    std::string comp_input, comp_model, comp_output = "batch.tcb";
    int comp_eps = 0;
    bool comp_huffman_only = false;
    compress->add_option("-i,--input", comp_input, "trajectory CSV")->required();
    compress->add_option("-m,--model", comp_model, "group model file")->required();
    compress->add_option("-o,--output", comp_output, "container output");
    compress->add_option("--eps", comp_eps, "error bound (hops)");
    compress->add_flag("--huffman-only", comp_huffman_only, "skip the entropy-reduction pass");
    comp_flags.add_to(compress);

    // decompress
    auto* decompress = app.add_subcommand("decompress", "restore trajectories from a container");
    std::string dec_input, dec_model, dec_output = "restored.csv";
    decompress->add_option("-i,--input", dec_input, "container file")->required();
    decompress->add_option("-m,--model", dec_model, "group model file")->required();
    decompress->add_option("-o,--output", dec_output, "output CSV");

    // encrypt / decrypt
    auto* encrypt = app.add_subcommand("encrypt", "Blowfish-encrypt a file");
    std::string enc_input, enc_output, enc_key;
    encrypt->add_option("-i,--input", enc_input)->required();
    encrypt->add_option("-o,--output", enc_output)->required();
    encrypt->add_option("--key-hex", enc_key, "hex key, 32..448 bits (or TRAJCOMP_KEY)");
    auto* decrypt = app.add_subcommand("decrypt", "Blowfish-decrypt a file");
    std::string dcr_input, dcr_output, dcr_key;
    decrypt->add_option("-i,--input", dcr_input)->required();
    decrypt->add_option("-o,--output", dcr_output)->required();
    decrypt->add_option("--key-hex", dcr_key, "hex key, 32..448 bits (or TRAJCOMP_KEY)");

    // bench
    auto* bench = app.add_subcommand("bench", "run the evaluation sweeps");
    ExperimentSpec spec;
    std::string bench_out = "bench_out";
    bool bench_plots = true;
    bench->add_option("--gdr", spec.gdrs, "dispersion radii to sweep");
    bench->add_option("--group-sizes", spec.group_sizes, "group sizes to sweep");
    bench->add_option("--batch-periods", spec.batch_periods, "batch periods to sweep");
    bench->add_option("--error-bounds", spec.error_bounds, "error bounds to sweep");
    bench->add_option("--reps", spec.repetitions, "seeds per sweep point");
    bench->add_option("--seed-base", spec.seed_base, "first seed");
    bench->add_option("-o,--out-dir", bench_out, "report directory");
    bench->add_flag("--plots,!--no-plots", bench_plots, "emit SVG plots");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(sim_flags, sim_output);
        if (mine->parsed())
            return cmd_mine(mine_input, mine_out_dir, mine_regions, mine_theta, mine_partition,
                            mine_flags);
        if (compress->parsed())
            return cmd_compress(comp_input, comp_model, comp_output, comp_eps,
                                comp_huffman_only, comp_flags);
        if (decompress->parsed()) return cmd_decompress(dec_input, dec_model, dec_output);
        if (encrypt->parsed()) return cmd_encrypt(enc_input, enc_output, enc_key, false);
        if (decrypt->parsed()) return cmd_encrypt(dcr_input, dcr_output, dcr_key, true);
        if (bench->parsed()) return cmd_bench(spec, bench_out, bench_plots);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
