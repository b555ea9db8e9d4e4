#ifndef SEMIHOL_JSON_IO_HPP
#define SEMIHOL_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "semihol/configuration.hpp"
#include "semihol/fk_observable.hpp"
#include "semihol/geometry.hpp"
#include "semihol/interface.hpp"
#include "semihol/parity.hpp"

namespace semihol {

using Json = nlohmann::json;

// Domain document: {delta, kind, path: [[x,t],...], marks: {a:[x,t], b:[x,t]}}.
Json domain_to_json(const SemiDiscreteDomain& dom);
SemiDiscreteDomain domain_from_json(const Json& j);

// Configuration document: {cuts: {col: [t,...]}, bridges: {...}, topology, beta?}.
Json config_to_json(const Configuration& cfg);
Configuration config_from_json(const Json& j);

// Chain checkpoint: {config, rng_state, sweeps}.
Json checkpoint_to_json(const Configuration& cfg, std::uint64_t rng_state, long sweeps);
void checkpoint_from_json(const Json& j, Configuration& cfg, std::uint64_t& rng_state,
                          long& sweeps);

// Trace export: [{kind, x, t0, t1, dir}, ...] polylines for rendering.
Json trace_to_json(const SemiDiscreteDomain& dom, const InterfaceTrace& tr);

// Labelling export: {intervals:[[col,t0,t1],...], path:[...], loops, total_length}.
Json labelling_to_json(const ParityLabelling& lab);

// Field dump CSV: col_index, color, t, re, im, se_re, se_im, n.
std::string field_to_csv(const ComplexField& field);

// Per-identity residual tables.
Json phi_dots_to_json(const PhiDotsReport& rep);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);
void save_text_file(const std::string& path, const std::string& text);

}  // namespace semihol

#endif
