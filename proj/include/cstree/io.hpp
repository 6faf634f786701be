#ifndef CSTREE_IO_HPP
#define CSTREE_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cstree/basis.hpp"
#include "cstree/contexts.hpp"
#include "cstree/dag.hpp"
#include "cstree/model.hpp"

namespace cstree {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Throws Io when the file cannot be read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);
// FNV-1a 64-bit digest of the bytes, "fnv1a64:<16 hex digits>".
std::string digest(std::string_view bytes);
// Parses text as JSON; throws Parse.
json parse_json(std::string_view text);

// {"1":0,"2":1}
json context_to_json(const Context& ctx);
Context context_from_json(const json& j);

// Fixture schema: {"p":..,"cards":[..],"levels":[{"level":k,"stages":[{"context":{..}}|{"members":[..]}],
// "complete":bool?}]}.  Throws Parse on a malformed document.
RawSpec raw_spec_from_json(const json& j);
CStreeSpec cstree_from_json(const json& j);
// Canonical form: only levels with listed stages, contexts in canonical order.
json to_json(const CStreeSpec& tree);

// {"vertices":[2,3,4],"edges":[[2,4]],"context":{"1":0}}; "context" is optional.
json to_json(const ContextDag& cd);
json to_json(const Dag& dag);
ContextDag context_dag_from_json(const json& j);
// Either a single DAG document or {"dags":[...]}.
std::vector<ContextDag> context_dags_from_json(const json& j);

// {"binomials":[{"plus":[["0",..],[..]],"minus":[..],"source":"..","context":".."}]}
json basis_to_json(const std::vector<SaturatedBinomial>& bs, const VariableSystem& sys);
std::vector<SaturatedBinomial> basis_from_json(const json& j, const VariableSystem& sys);
// One binomial per line.
std::string basis_to_text(const std::vector<SaturatedBinomial>& bs, const VariableSystem& sys);

std::string to_dot(const ContextDag& cd);
std::string to_dot(const UndirectedGraph& g, const std::string& name = "moral");
// Event tree with one fill class per stage; singleton stages are left unfilled.
std::string to_dot(const CStreeSpec& tree);

}  // namespace cstree

#endif
