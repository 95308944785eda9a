#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aitax::tco {

// Currency is carried as integer cents.
using Cents = std::int64_t;

Cents dollars_to_cents(double dollars);
std::string format_dollars(Cents c);  // "$33,577,760" or "$184.20"

struct CatalogItem {
    std::string sku;
    std::string description;
    Cents unit_price = 0;
    double unit_power = 0.0;  // watts, 0 if unknown
};

struct BomLine {
    CatalogItem item;
    std::uint64_t quantity = 0;
};

struct BillOfMaterials {
    std::vector<BomLine> lines;
    std::uint64_t quantity_of(const std::string& sku) const;
};

Cents bom_total(const BillOfMaterials& bom);
double component_power_kw(const BillOfMaterials& bom);

struct FatTree {
    std::uint64_t edge = 0;
    std::uint64_t aggregation = 0;
    std::uint64_t core = 0;
    std::uint64_t switches = 0;
    std::uint64_t cables = 0;
};

// Three-level non-blocking fat tree. Throws std::invalid_argument unless
// ports is even and >= 2.
FatTree fat_tree_size(std::uint64_t nodes, std::uint32_t ports);

Cents power_cost(double kw, double rate_per_kwh, double hours);
double facility_kw(double it_kw, double cooling_factor = 1.0);

struct PowerInputs {
    std::optional<double> it_kw;           // IT load; facility adds cooling
    double cooling_factor = 1.0;
    std::optional<Cents> cost_per_year;    // direct figure, overrides it_kw
    double rate_per_kwh = 0.10;
    double hours_per_year = 8760.0;
};

struct TcoReport {
    std::string design;
    Cents equipment_total = 0;
    Cents amortized_per_year = 0;
    double amortization_years = 3.0;
    double power_kw = 0.0;  // facility load
    Cents power_cost_per_year = 0;
    double overhead_factor = 0.0;
    Cents yearly_total = 0;
    std::optional<double> delta_vs_baseline;  // 1 - this / baseline
};

// Throws std::invalid_argument for nonpositive amortization or missing power inputs.
TcoReport yearly_tco(const BillOfMaterials& bom, double amortization_years, const PowerInputs& power,
                     double overhead_factor = 0.0);
double tco_delta(const TcoReport& design, const TcoReport& baseline);

struct Catalog {
    std::map<std::string, CatalogItem> items;
    const CatalogItem& item(const std::string& sku) const;  // throws std::out_of_range
};

using ItemList = std::vector<std::pair<std::string, std::uint64_t>>;

struct HomogeneousDesign {
    std::uint64_t nodes = 0;
    ItemList node_items;
    std::uint32_t switch_ports = 32;
    std::string switch_sku;
    std::string cable_sku;
    PowerInputs power;
};

// Splitter topology: brokers pair up on fast ports; compute nodes hang off
// slow switches through four-way splitters; slow switches pair up under fast
// edge switches; every edge switch links once to each core switch.
struct SplitterRules {
    std::uint32_t switch_ports = 32;
    std::string fast_switch_sku;
    std::string slow_switch_sku;
    std::uint32_t brokers_per_fast_port = 2;
    std::string broker_splitter_sku;
    std::uint32_t compute_per_slow_port = 4;
    std::string compute_splitter_sku;
    std::uint32_t slow_switch_down_ports = 16;
    std::uint32_t slow_switches_per_edge = 2;
    std::uint32_t edge_splitters_per_compute_edge = 1;
    std::string edge_splitter_sku;
    std::string interconnect_sku;
};

struct PurposeBuiltDesign {
    std::uint64_t compute_nodes = 0;
    std::uint64_t broker_nodes = 0;
    ItemList compute_items;
    ItemList broker_items;
    SplitterRules network;
    PowerInputs power;
};

BillOfMaterials homogeneous_bom(const Catalog& catalog, const HomogeneousDesign& design);

// Throws std::invalid_argument for zero node counts and std::out_of_range for
// a missing sku.
BillOfMaterials purpose_built_bom(std::uint64_t compute_nodes, std::uint64_t broker_nodes, const Catalog& catalog,
                                  const PurposeBuiltDesign& design);

struct NodeSplit {
    std::uint64_t producers = 0;
    std::uint64_t consumers = 0;
};

// Compute nodes divided producers:consumers = 1:2, as in the measured cluster.
NodeSplit split_compute_nodes(std::uint64_t compute_nodes, std::uint32_t producer_share = 1,
                              std::uint32_t consumer_share = 2);

struct TcoConfig {
    Catalog catalog;
    std::optional<HomogeneousDesign> homogeneous;
    std::optional<PurposeBuiltDesign> purpose_built;
    double amortization_years = 3.0;
    double overhead_factor = 0.0;
};

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

TcoConfig load_tco_config(const std::string& document);
TcoConfig load_tco_config_file(const std::string& path);

struct TcoComparison {
    std::vector<std::pair<TcoReport, BillOfMaterials>> designs;
};

// design: "homogeneous", "purpose-built" or "both". With both, the
// purpose-built report carries its delta against the homogeneous baseline.
TcoComparison compare(const TcoConfig& config, const std::string& design);
std::string comparison_json(const TcoComparison& c);
std::string comparison_text(const TcoComparison& c);

}  // namespace aitax::tco
