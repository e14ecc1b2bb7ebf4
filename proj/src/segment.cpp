#include "trajcomp/segment.hpp"

#include <algorithm>
#include <map>

namespace trajcomp {
namespace {

struct Run {
    ObjectId object;
    int cluster;
    Timestamp begin;
    std::vector<Symbol> symbols;
    bool consumed = false;

    Timestamp end() const { return begin + static_cast<Timestamp>(symbols.size()); }
};

std::vector<Run> split_runs(const LocationSequence& seq, const SensorGrid& grid) {
    std::vector<Run> runs;
    for (const auto& item : seq.items) {
        const int cluster = grid.cluster_of(item.symbol);
        const bool contiguous = !runs.empty() && runs.back().cluster == cluster &&
                                runs.back().end() == item.t;
        if (!contiguous) runs.push_back(Run{seq.object_id, cluster, item.t, {}, false});
        runs.back().symbols.push_back(item.symbol);
    }
    return runs;
}

Segment slice_solo(const Run& run, Timestamp from, Timestamp to) {
    Segment s;
    s.kind = SegmentKind::Solo;
    s.cluster = run.cluster;
    s.begin = from;
    s.members = {run.object};
    s.bodies = {std::vector<Symbol>(run.symbols.begin() + (from - run.begin),
                                    run.symbols.begin() + (to - run.begin))};
    return s;
}

} // namespace

std::vector<Segment> segment_and_align(const std::vector<LocationSequence>& seqs,
                                       const SensorGrid& grid) {
    std::map<int, std::vector<Run>> runs_by_cluster;
    for (const auto& seq : seqs)
        for (auto& run : split_runs(seq, grid))
            runs_by_cluster[run.cluster].push_back(std::move(run));

    std::vector<Segment> out;
    for (auto& [cluster, runs] : runs_by_cluster) {
        std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
            return a.begin != b.begin ? a.begin < b.begin : a.object < b.object;
        });

        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].consumed) continue;
            runs[i].consumed = true;

            // Greedily collect runs of other objects whose windows still
            // intersect the narrowing common window.
            std::vector<Run*> group = {&runs[i]};
            Timestamp wb = runs[i].begin, we = runs[i].end();
            for (std::size_t j = i + 1; j < runs.size(); ++j) {
                if (runs[j].consumed) continue;
                const bool member_already = std::any_of(
                    group.begin(), group.end(),
                    [&](const Run* r) { return r->object == runs[j].object; });
                if (member_already) continue;
                const Timestamp b = std::max(wb, runs[j].begin);
                const Timestamp e = std::min(we, runs[j].end());
                if (b >= e) continue;
                runs[j].consumed = true;
                group.push_back(&runs[j]);
                wb = b;
                we = e;
            }

            if (group.size() == 1) {
                out.push_back(slice_solo(runs[i], runs[i].begin, runs[i].end()));
                continue;
            }

            std::sort(group.begin(), group.end(),
                      [](const Run* a, const Run* b) { return a->object < b->object; });
            Segment g;
            g.kind = SegmentKind::Group;
            g.cluster = cluster;
            g.begin = wb;
            for (const Run* r : group) {
                g.members.push_back(r->object);
                g.bodies.emplace_back(r->symbols.begin() + (wb - r->begin),
                                      r->symbols.begin() + (we - r->begin));
            }
            out.push_back(std::move(g));

            // Non-overlapping ends of each member run become solo segments.
            for (const Run* r : group) {
                if (r->begin < wb) out.push_back(slice_solo(*r, r->begin, wb));
                if (r->end() > we) out.push_back(slice_solo(*r, we, r->end()));
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const Segment& a, const Segment& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        if (a.kind != b.kind) return a.kind == SegmentKind::Group;
        if (a.members.front() != b.members.front()) return a.members.front() < b.members.front();
        return a.cluster < b.cluster;
    });
    return out;
}

} // namespace trajcomp
