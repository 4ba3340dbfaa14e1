#pragma once

// JSON forms of the library's value types. Loaders validate and raise
// SchemaError naming the offending field; `where` is a prefix (usually the
// file path) included in every message.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "majent/densop.hpp"
#include "majent/qchan.hpp"
#include "majent/seqmaj.hpp"
#include "majent/xfer.hpp"

namespace majent::io {

using Json = nlohmann::json;

/// IoError when unreadable, SchemaError (with the parser's byte offset) when
/// the text is not JSON.
Json load_json(const std::filesystem::path& path);
void save_json(const Json& value, const std::filesystem::path& path);
std::string dump(const Json& value);

Json to_json(const ProbVector& p);
ProbVector prob_vector_from_json(const Json& j, std::string_view where);

/// {"d":n,"rows":[[...],...]} for DoublyStochasticMatrix and OrthogonalMatrix.
Json real_matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd real_matrix_from_json(const Json& j, std::string_view where);
DoublyStochasticMatrix doubly_stochastic_from_json(const Json& j, std::string_view where);
OrthogonalMatrix orthogonal_from_json(const Json& j, std::string_view where);

Json to_json(const BirkhoffDecomposition& b);
BirkhoffDecomposition birkhoff_from_json(const Json& j, std::string_view where);

Json to_json(const TransferChain& c);

/// {"d_rows":r,"d_cols":c,"rows":[[[re,im],...],...]}.
Json to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const Json& j, std::string_view where);

/// ComplexMatrix form plus "kind":"density"; validated on load.
Json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j, std::string_view where);

Json to_json(const KrausChannel& phi);
KrausChannel channel_from_json(const Json& j, std::string_view where);

Json to_json(const MajorizationVerdict& v);
Json to_json(const IsometryReport& r);

/// Header "n,trace_distance,bound", one row per n, shortest round-trip decimals.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

}  // namespace majent::io
