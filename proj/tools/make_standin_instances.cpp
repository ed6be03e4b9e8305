// Regenerates the stand-in benchmark instances under data/. The original
// sources of the three published benchmark instances are not redistributable
// here, so data/ ships synthetic stand-ins with the published dimensions and
// best-known headers; see data/README.md. Fixed seeds keep the files
// byte-stable across regenerations.
//
// Recipe per instance: integer item values and weights drawn uniformly from
// the documented ranges, every capacity set to a fixed fraction of the total
// weight of its sack row (rounded). The single-sack stand-ins use fraction
// 0.5; the multi-sack ones use 0.35, which makes random bitstrings reliably
// infeasible across the 30 (resp. 5) constraints, as on the originals.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gagt/knapsack.hpp"
#include "gagt/knapsack_io.hpp"
#include "gagt/rng.hpp"

namespace {

double uniform_int(gagt::SplitMix64& rng, int lo, int hi) {
    return static_cast<double>(lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))));
}

gagt::KnapsackInstance make_instance(const std::string& name, std::size_t n_items, std::size_t n_sacks,
                                     int value_lo, int value_hi, int weight_lo, int weight_hi,
                                     double capacity_fraction, std::uint64_t seed) {
    gagt::SplitMix64 rng(seed);
    gagt::KnapsackInstance inst;
    inst.name = name;
    inst.values.reserve(n_items);
    for (std::size_t j = 0; j < n_items; ++j) inst.values.push_back(uniform_int(rng, value_lo, value_hi));
    inst.weights.assign(n_sacks, {});
    inst.capacities.reserve(n_sacks);
    for (std::size_t m = 0; m < n_sacks; ++m) {
        auto& row = inst.weights[m];
        row.reserve(n_items);
        double total = 0.0;
        for (std::size_t j = 0; j < n_items; ++j) {
            row.push_back(uniform_int(rng, weight_lo, weight_hi));
            total += row.back();
        }
        inst.capacities.push_back(std::round(total * capacity_fraction));
    }
    gagt::validate_instance(inst);
    return inst;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        std::exit(1);
    }
    out << text;
    std::cout << "wrote " << path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";

    // Single-sack stand-ins, capacity = half the total weight, true optima
    // unknown. sk250 uses values and weights in [10, 100]. sk100 keeps the
    // [10, 100] values but draws weights from [150, 1500]: with item values
    // that small next to the capacity, inflated infeasible packings compete
    // with feasible ones inside the studied cheating-degree range, which is
    // the regime the cheating-degree sweep operates in.
    write_file(dir + "/sk100.json",
               gagt::serialize_json_instance(make_instance("sk100-standin", 100, 1, 10, 100, 150, 1500, 0.5, 100)));
    write_file(dir + "/sk250.json",
               gagt::serialize_json_instance(make_instance("sk250-standin", 250, 1, 10, 100, 10, 100, 0.5, 250)));

    // Multi-sack stand-ins carrying the published dimensions and best-known
    // headers of Sento1 (60 items, 30 sacks, 7772) and MK250 (250 items,
    // 5 sacks, 59312). The coefficient data is synthetic; the best-known
    // header refers to the original instance, not to the stand-in data.
    gagt::KnapsackInstance sento = make_instance("sento1-standin", 60, 30, 100, 500, 10, 100, 0.35, 60);
    sento.best_known = 7772;
    write_file(dir + "/sento1.dat", gagt::serialize_orlib_mknap({sento}));

    gagt::KnapsackInstance mk250 = make_instance("mk250-standin", 250, 5, 100, 900, 10, 100, 0.35, 2505);
    mk250.best_known = 59312;
    write_file(dir + "/mk250.dat", gagt::serialize_orlib_mknap({mk250}));
    return 0;
}
