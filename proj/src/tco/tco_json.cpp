#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tco/tco.hpp"

namespace aitax::tco {
namespace {

using nlohmann::json;

// Rejects unknown keys so a typo in a catalog never silently falls back to a default.
void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw CatalogError(where + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) throw CatalogError(where + "." + it.key() + ": unknown key");
}

double number(const json& obj, const std::string& where, const char* key, std::optional<double> dflt = {}) {
    if (!obj.contains(key)) {
        if (dflt) return *dflt;
        throw CatalogError(where + "." + key + ": required");
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) throw CatalogError(where + "." + key + ": expected a number");
    return v.get<double>();
}

std::uint64_t count(const json& obj, const std::string& where, const char* key, std::optional<std::uint64_t> dflt = {}) {
    if (!obj.contains(key)) {
        if (dflt) return *dflt;
        throw CatalogError(where + "." + key + ": required");
    }
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw CatalogError(where + "." + key + ": expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& where, const char* key, bool required = true) {
    if (!obj.contains(key)) {
        if (required) throw CatalogError(where + "." + key + ": required");
        return {};
    }
    const auto& v = obj.at(key);
    if (!v.is_string()) throw CatalogError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

ItemList item_list(const json& obj, const std::string& where, const char* key, const Catalog& cat) {
    ItemList out;
    if (!obj.contains(key)) return out;
    const auto& arr = obj.at(key);
    if (!arr.is_array()) throw CatalogError(where + "." + key + ": expected [[sku, quantity], ...]");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& e = arr[i];
        const std::string at = where + "." + key + "[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number_integer() ||
            e[1].get<std::int64_t>() < 0)
            throw CatalogError(at + ": expected [sku, quantity]");
        const auto sku = e[0].get<std::string>();
        if (!cat.items.count(sku)) throw CatalogError(at + ": sku " + sku + " not in catalog");
        out.emplace_back(sku, e[1].get<std::uint64_t>());
    }
    return out;
}

void require_sku(const Catalog& cat, const std::string& where, const std::string& sku) {
    if (!cat.items.count(sku)) throw CatalogError(where + ": sku " + sku + " not in catalog");
}

PowerInputs power(const json& obj, const std::string& where) {
    check_keys(obj, where, {"it_kw", "cooling_factor", "cost_per_year", "rate_per_kwh", "hours_per_year"});
    PowerInputs p;
    if (obj.contains("it_kw")) p.it_kw = number(obj, where, "it_kw");
    if (obj.contains("cost_per_year")) p.cost_per_year = dollars_to_cents(number(obj, where, "cost_per_year"));
    if (!p.it_kw && !p.cost_per_year) throw CatalogError(where + ": needs it_kw or cost_per_year");
    p.cooling_factor = number(obj, where, "cooling_factor", 1.0);
    p.rate_per_kwh = number(obj, where, "rate_per_kwh", 0.10);
    p.hours_per_year = number(obj, where, "hours_per_year", 8760.0);
    if ((p.it_kw && *p.it_kw < 0) || p.cooling_factor < 0 || p.rate_per_kwh < 0 || p.hours_per_year < 0 ||
        (p.cost_per_year && *p.cost_per_year < 0))
        throw CatalogError(where + ": power inputs must be >= 0");
    return p;
}

std::uint32_t port_count(const json& obj, const std::string& where, const char* key, std::uint32_t dflt) {
    const auto v = count(obj, where, key, dflt);
    if (v == 0 || v > 1u << 16) throw CatalogError(where + "." + key + ": must be in 1..65536");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

TcoConfig load_tco_config(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw CatalogError(std::string("parse error: ") + e.what());
    }
    check_keys(doc, "catalog", {"items", "homogeneous", "purpose_built", "amortization_years", "overhead_factor"});
    TcoConfig cfg;
    cfg.amortization_years = number(doc, "catalog", "amortization_years", 3.0);
    cfg.overhead_factor = number(doc, "catalog", "overhead_factor", 0.0);
    if (!(cfg.amortization_years > 0)) throw CatalogError("catalog.amortization_years: must be > 0");
    if (cfg.overhead_factor < 0) throw CatalogError("catalog.overhead_factor: must be >= 0");

    if (doc.contains("items")) {
        const auto& items = doc.at("items");
        if (!items.is_array()) throw CatalogError("catalog.items: expected an array");
        for (std::size_t i = 0; i < items.size(); ++i) {
            const std::string at = "catalog.items[" + std::to_string(i) + "]";
            check_keys(items[i], at, {"sku", "description", "unit_price", "unit_power"});
            CatalogItem it;
            it.sku = text(items[i], at, "sku");
            it.description = text(items[i], at, "description", false);
            const double price = number(items[i], at, "unit_price");
            it.unit_power = number(items[i], at, "unit_power", 0.0);
            if (price < 0 || it.unit_power < 0) throw CatalogError(at + ": price and power must be >= 0");
            it.unit_price = dollars_to_cents(price);
            if (!cfg.catalog.items.emplace(it.sku, it).second) throw CatalogError(at + ": duplicate sku " + it.sku);
        }
    }

    if (doc.contains("homogeneous")) {
        const std::string at = "catalog.homogeneous";
        const auto& h = doc.at("homogeneous");
        check_keys(h, at, {"nodes", "node_items", "switch_ports", "switch_sku", "cable_sku", "power"});
        HomogeneousDesign d;
        d.nodes = count(h, at, "nodes");
        d.node_items = item_list(h, at, "node_items", cfg.catalog);
        d.switch_ports = port_count(h, at, "switch_ports", 32);
        d.switch_sku = text(h, at, "switch_sku");
        d.cable_sku = text(h, at, "cable_sku");
        require_sku(cfg.catalog, at + ".switch_sku", d.switch_sku);
        require_sku(cfg.catalog, at + ".cable_sku", d.cable_sku);
        if (!h.contains("power")) throw CatalogError(at + ".power: required");
        d.power = power(h.at("power"), at + ".power");
        cfg.homogeneous = std::move(d);
    }

    if (doc.contains("purpose_built")) {
        const std::string at = "catalog.purpose_built";
        const auto& p = doc.at("purpose_built");
        check_keys(p, at, {"compute_nodes", "broker_nodes", "compute_items", "broker_items", "network", "power"});
        PurposeBuiltDesign d;
        d.compute_nodes = count(p, at, "compute_nodes");
        d.broker_nodes = count(p, at, "broker_nodes");
        d.compute_items = item_list(p, at, "compute_items", cfg.catalog);
        d.broker_items = item_list(p, at, "broker_items", cfg.catalog);
        if (!p.contains("network")) throw CatalogError(at + ".network: required");
        const std::string nat = at + ".network";
        const auto& n = p.at("network");
        check_keys(n, nat,
                   {"switch_ports", "fast_switch_sku", "slow_switch_sku", "brokers_per_fast_port", "broker_splitter_sku",
                    "compute_per_slow_port", "compute_splitter_sku", "slow_switch_down_ports", "slow_switches_per_edge",
                    "edge_splitters_per_compute_edge", "edge_splitter_sku", "interconnect_sku"});
        auto& r = d.network;
        r.switch_ports = port_count(n, nat, "switch_ports", 32);
        r.brokers_per_fast_port = port_count(n, nat, "brokers_per_fast_port", 2);
        r.compute_per_slow_port = port_count(n, nat, "compute_per_slow_port", 4);
        r.slow_switch_down_ports = port_count(n, nat, "slow_switch_down_ports", 16);
        r.slow_switches_per_edge = port_count(n, nat, "slow_switches_per_edge", 2);
        r.edge_splitters_per_compute_edge =
            static_cast<std::uint32_t>(count(n, nat, "edge_splitters_per_compute_edge", 1));
        r.fast_switch_sku = text(n, nat, "fast_switch_sku");
        r.slow_switch_sku = text(n, nat, "slow_switch_sku");
        r.broker_splitter_sku = text(n, nat, "broker_splitter_sku");
        r.compute_splitter_sku = text(n, nat, "compute_splitter_sku");
        r.edge_splitter_sku = text(n, nat, "edge_splitter_sku");
        r.interconnect_sku = text(n, nat, "interconnect_sku");
        for (const auto* s : {&r.fast_switch_sku, &r.slow_switch_sku, &r.broker_splitter_sku, &r.compute_splitter_sku,
                              &r.edge_splitter_sku, &r.interconnect_sku})
            require_sku(cfg.catalog, nat, *s);
        if (r.switch_ports % 2) throw CatalogError(nat + ".switch_ports: must be even");
        if (!p.contains("power")) throw CatalogError(at + ".power: required");
        d.power = power(p.at("power"), at + ".power");
        cfg.purpose_built = std::move(d);
    }
    return cfg;
}

TcoConfig load_tco_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open catalog " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_tco_config(ss.str());
}

std::string comparison_json(const TcoComparison& c) {
    json out = json::object();
    json designs = json::array();
    for (const auto& [rep, bom] : c.designs) {
        json d;
        d["design"] = rep.design;
        d["equipment_total_cents"] = rep.equipment_total;
        d["amortization_years"] = rep.amortization_years;
        d["amortized_equipment_per_year_cents"] = rep.amortized_per_year;
        d["power_kw"] = rep.power_kw;
        d["power_cost_per_year_cents"] = rep.power_cost_per_year;
        d["overhead_factor"] = rep.overhead_factor;
        d["yearly_total_cents"] = rep.yearly_total;
        d["delta_vs_baseline"] = rep.delta_vs_baseline ? json(*rep.delta_vs_baseline) : json(nullptr);
        json lines = json::array();
        for (const auto& l : bom.lines)
            lines.push_back({{"sku", l.item.sku},
                             {"description", l.item.description},
                             {"unit_price_cents", l.item.unit_price},
                             {"quantity", l.quantity},
                             {"line_total_cents", l.item.unit_price * static_cast<Cents>(l.quantity)}});
        d["bom"] = std::move(lines);
        designs.push_back(std::move(d));
    }
    out["designs"] = std::move(designs);
    return out.dump(2) + "\n";
}

std::string comparison_text(const TcoComparison& c) {
    std::ostringstream os;
    char buf[256];
    for (const auto& [rep, bom] : c.designs) {
        os << rep.design << "\n";
        for (const auto& l : bom.lines) {
            std::snprintf(buf, sizeof buf, "  %-16s %14s x %6llu = %16s\n", l.item.sku.c_str(),
                          format_dollars(l.item.unit_price).c_str(), static_cast<unsigned long long>(l.quantity),
                          format_dollars(l.item.unit_price * static_cast<Cents>(l.quantity)).c_str());
            os << buf;
        }
        auto row = [&](const char* label, const std::string& value) {
            std::snprintf(buf, sizeof buf, "  %-32s %20s\n", label, value.c_str());
            os << buf;
        };
        row("equipment total", format_dollars(rep.equipment_total));
        std::snprintf(buf, sizeof buf, "%.0f yr", rep.amortization_years);
        row("amortization", buf);
        row("amortized equipment / yr", format_dollars(rep.amortized_per_year));
        std::snprintf(buf, sizeof buf, "%.2f kW", rep.power_kw);
        row("facility power", buf);
        row("power / yr", format_dollars(rep.power_cost_per_year));
        row("yearly total", format_dollars(rep.yearly_total));
        if (rep.delta_vs_baseline) {
            std::snprintf(buf, sizeof buf, "%.2f%%", *rep.delta_vs_baseline * 100.0);
            row("lower than homogeneous by", buf);
        }
    }
    return os.str();
}

}  // namespace aitax::tco
