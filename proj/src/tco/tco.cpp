#include "tco/tco.hpp"

#include <cmath>
#include <cstdio>

namespace aitax::tco {

Cents dollars_to_cents(double dollars) { return static_cast<Cents>(std::llround(dollars * 100.0)); }

std::string format_dollars(Cents c) {
    const bool neg = c < 0;
    if (neg) c = -c;
    std::string whole = std::to_string(c / 100);
    std::string grouped;
    for (std::size_t i = 0; i < whole.size(); ++i) {
        if (i > 0 && (whole.size() - i) % 3 == 0) grouped.push_back(',');
        grouped.push_back(whole[i]);
    }
    std::string out = (neg ? "-$" : "$") + grouped;
    if (c % 100 != 0) {
        char buf[8];
        std::snprintf(buf, sizeof buf, ".%02lld", static_cast<long long>(c % 100));
        out += buf;
    }
    return out;
}

std::uint64_t BillOfMaterials::quantity_of(const std::string& sku) const {
    std::uint64_t q = 0;
    for (const auto& l : lines)
        if (l.item.sku == sku) q += l.quantity;
    return q;
}

Cents bom_total(const BillOfMaterials& bom) {
    Cents total = 0;
    for (const auto& l : bom.lines) total += l.item.unit_price * static_cast<Cents>(l.quantity);
    return total;
}

double component_power_kw(const BillOfMaterials& bom) {
    double w = 0.0;
    for (const auto& l : bom.lines) w += l.item.unit_power * static_cast<double>(l.quantity);
    return w / 1000.0;
}

static std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

FatTree fat_tree_size(std::uint64_t nodes, std::uint32_t ports) {
    if (ports < 2 || ports % 2 != 0) throw std::invalid_argument("switch ports must be even and >= 2");
    FatTree t;
    if (nodes == 0) return t;
    if (nodes <= ports) {
        t.edge = 1;
        t.switches = 1;
        t.cables = nodes;
        return t;
    }
    t.edge = ceil_div(nodes, ports / 2);
    t.aggregation = t.edge;
    t.core = ceil_div(t.edge, 2);
    t.switches = t.edge + t.aggregation + t.core;
    t.cables = 3 * nodes;
    return t;
}

Cents power_cost(double kw, double rate, double hours) {
    if (kw < 0 || rate < 0 || hours < 0) throw std::invalid_argument("power inputs must be >= 0");
    return static_cast<Cents>(std::llround(kw * rate * hours * 100.0));
}

double facility_kw(double it_kw, double cooling_factor) { return it_kw * (1.0 + cooling_factor); }

TcoReport yearly_tco(const BillOfMaterials& bom, double years, const PowerInputs& power, double overhead) {
    if (!(years > 0.0)) throw std::invalid_argument("amortization years must be > 0");
    TcoReport r;
    r.equipment_total = bom_total(bom);
    r.amortization_years = years;
    r.amortized_per_year = static_cast<Cents>(std::llround(static_cast<double>(r.equipment_total) / years));
    if (power.cost_per_year) {
        r.power_cost_per_year = *power.cost_per_year;
        r.power_kw = static_cast<double>(*power.cost_per_year) / 100.0 / (power.rate_per_kwh * power.hours_per_year);
    } else if (power.it_kw) {
        r.power_kw = facility_kw(*power.it_kw, power.cooling_factor);
        r.power_cost_per_year = power_cost(r.power_kw, power.rate_per_kwh, power.hours_per_year);
    } else {
        throw std::invalid_argument("power needs it_kw or cost_per_year");
    }
    r.overhead_factor = overhead;
    r.yearly_total = static_cast<Cents>(std::llround(static_cast<double>(r.amortized_per_year) * (1.0 + overhead))) +
                     r.power_cost_per_year;
    return r;
}

double tco_delta(const TcoReport& design, const TcoReport& baseline) {
    return 1.0 - static_cast<double>(design.yearly_total) / static_cast<double>(baseline.yearly_total);
}

const CatalogItem& Catalog::item(const std::string& sku) const {
    auto it = items.find(sku);
    if (it == items.end()) throw std::out_of_range("catalog has no sku " + sku);
    return it->second;
}

static void add_line(BillOfMaterials& bom, const Catalog& cat, const std::string& sku, std::uint64_t qty) {
    bom.lines.push_back({cat.item(sku), qty});
}

BillOfMaterials homogeneous_bom(const Catalog& cat, const HomogeneousDesign& d) {
    BillOfMaterials bom;
    for (const auto& [sku, per_node] : d.node_items) add_line(bom, cat, sku, per_node * d.nodes);
    const FatTree t = fat_tree_size(d.nodes, d.switch_ports);
    add_line(bom, cat, d.switch_sku, t.switches);
    add_line(bom, cat, d.cable_sku, t.cables);
    return bom;
}

BillOfMaterials purpose_built_bom(std::uint64_t compute, std::uint64_t brokers, const Catalog& cat,
                                  const PurposeBuiltDesign& d) {
    if (compute == 0) throw std::invalid_argument("purpose-built design needs compute nodes");
    if (brokers == 0) throw std::invalid_argument("purpose-built design needs broker nodes");
    const SplitterRules& n = d.network;
    if (n.switch_ports < 2 || n.switch_ports % 2 || n.brokers_per_fast_port == 0 || n.compute_per_slow_port == 0 ||
        n.slow_switch_down_ports == 0 || n.slow_switches_per_edge == 0)
        throw std::invalid_argument("splitter rules need positive port counts");
    BillOfMaterials bom;
    for (const auto& [sku, per] : d.compute_items) add_line(bom, cat, sku, per * compute);
    for (const auto& [sku, per] : d.broker_items) add_line(bom, cat, sku, per * brokers);

    const std::uint64_t edge_down = n.switch_ports / 2;
    const std::uint64_t broker_ports = ceil_div(brokers, n.brokers_per_fast_port);
    const std::uint64_t broker_edges = ceil_div(broker_ports, edge_down);
    const std::uint64_t slow_ports = ceil_div(compute, n.compute_per_slow_port);
    const std::uint64_t slow_switches = ceil_div(slow_ports, n.slow_switch_down_ports);
    const std::uint64_t compute_edges = ceil_div(slow_switches, n.slow_switches_per_edge);
    const std::uint64_t edges = broker_edges + compute_edges;
    const std::uint64_t core = edge_down;  // one uplink from every edge to every core switch
    if (edges > n.switch_ports) throw std::invalid_argument("design exceeds a two-level tree");

    add_line(bom, cat, n.fast_switch_sku, edges + core);
    add_line(bom, cat, n.slow_switch_sku, slow_switches);
    add_line(bom, cat, n.edge_splitter_sku, compute_edges * n.edge_splitters_per_compute_edge);
    add_line(bom, cat, n.compute_splitter_sku, slow_ports);
    add_line(bom, cat, n.broker_splitter_sku, broker_ports);
    add_line(bom, cat, n.interconnect_sku, edges * core);
    return bom;
}

NodeSplit split_compute_nodes(std::uint64_t compute, std::uint32_t producer_share, std::uint32_t consumer_share) {
    const std::uint64_t shares = producer_share + consumer_share;
    if (shares == 0) throw std::invalid_argument("node split needs positive shares");
    NodeSplit s;
    s.producers = compute * producer_share / shares;
    s.consumers = compute - s.producers;
    return s;
}

TcoComparison compare(const TcoConfig& cfg, const std::string& design) {
    const bool want_h = design == "homogeneous" || design == "both";
    const bool want_p = design == "purpose-built" || design == "both";
    if (!want_h && !want_p) throw std::invalid_argument("design must be homogeneous, purpose-built or both");
    if (cfg.catalog.items.empty()) throw CatalogError("catalog is empty");
    TcoComparison out;
    if (want_h) {
        if (!cfg.homogeneous) throw CatalogError("catalog defines no homogeneous design");
        auto bom = homogeneous_bom(cfg.catalog, *cfg.homogeneous);
        auto rep = yearly_tco(bom, cfg.amortization_years, cfg.homogeneous->power, cfg.overhead_factor);
        rep.design = "homogeneous";
        out.designs.emplace_back(rep, bom);
    }
    if (want_p) {
        if (!cfg.purpose_built) throw CatalogError("catalog defines no purpose-built design");
        const auto& d = *cfg.purpose_built;
        auto bom = purpose_built_bom(d.compute_nodes, d.broker_nodes, cfg.catalog, d);
        auto rep = yearly_tco(bom, cfg.amortization_years, d.power, cfg.overhead_factor);
        rep.design = "purpose-built";
        if (want_h) rep.delta_vs_baseline = tco_delta(rep, out.designs.front().first);
        out.designs.emplace_back(rep, bom);
    }
    return out;
}

}  // namespace aitax::tco
