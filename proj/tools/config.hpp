#pragma once

#include "liouville/holography.hpp"
#include "liouville/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace cli {

using json = nlohmann::json;

json read_json_file(const std::string& path);
// "hyperbolic", an inline JSON object, or a path to a JSON file
json metric_argument(const std::string& arg);

// {"kind":"fuchsian","genus":g} or {"kind":"schottky","pairs":[...],"infinity_in_limit_set":true}.
// Output of `group build` is accepted as well; only these keys are read.
json group_spec(const json& doc);
lv::MarkedGroup build_group(const json& spec);
json describe_group(const json& spec, const lv::MarkedGroup& g);

// {"metric":"hyperbolic"} | {"metric":"poincare","N":5}
// | {"metric":"perturbed","t":0.1,"bump":{"center":[x,y],"width":0.5},"base":{...}}
// | {"metric":"expansion","base":{...},"basis":"bumps:16","coefficients":[...]}
// A solver report is accepted through its "field" entry.
json metric_spec(const json& doc);
lv::FieldPtr build_field(const json& spec, const lv::FundamentalPolygon& poly);

// "bumps:16" -> 16
int basis_size(const std::string& basis);

struct Tolerances {
    double tol2d = 1e-9;
    double tol1d = 1e-10;
    double tol3d = 1e-6;

    void validate() const;
    lv::ActionOptions action() const;
    lv::HolographyOptions holography() const;
    json to_json() const;
};

std::vector<double> parse_eps_list(const std::string& s);

// FNV-1a of the canonical (sorted-key, compact) dump
std::uint64_t config_hash(const json& config);
std::string hex(std::uint64_t h);

// attaches {"config": config, "config_hash": ..., "version": ...}
json stamped(json report, const json& config);

json to_json(const lv::ActionBreakdown& b);
json to_json(const lv::MoebiusMap& m);

void write_text(const std::string& path, const std::string& text);

}  // namespace cli
